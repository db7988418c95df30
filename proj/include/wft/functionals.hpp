#pragma once

#include <vector>

#include "wft/boundary.hpp"
#include "wft/front_tracking.hpp"
#include "wft/weights.hpp"

namespace wft {

/// One wave of a configuration: position, family (n+1 = non-physical) and signed strength.
struct Wave {
  double x = 0.0;
  int family = 1;
  double strength = 0.0;
  int group = 0;  // waves of one jump share a group and never interact with each other
};
using WaveList = std::vector<Wave>;

enum class UpsilonVariant { Approximate, Exact };

struct FunctionalReport {
  double V = 0.0, Vg = 0.0, Q = 0.0, Upsilon = 0.0;
  std::vector<double> V_family;  // unweighted |sigma| per family 1..n+1 (index 0 unused)
  std::size_t approaching_pairs = 0;
};

/// Approximate: fronts as stored (non-physical fronts as family n+1).
/// Exact: every jump re-decomposed with E, plus the boundary waves E_b(u(gamma+), g(t)) at gamma.
WaveList wave_list(const HyperbolicSystem& sys, const Boundary& bdry, const Configuration& cfg,
                   UpsilonVariant variant);

bool approaching(const HyperbolicSystem& sys, const Wave& a, const Wave& b);

FunctionalReport compute_upsilon(const HyperbolicSystem& sys, const Boundary& bdry, const Configuration& cfg,
                                 const FunctionalWeights& w, UpsilonVariant variant = UpsilonVariant::Approximate);

/// Intervals of the common refinement of u and w on [gamma, inf) and q with w = S(q)(u) on each.
struct QCoordinates {
  std::vector<double> a, b;   // interval ends (b.back() = inf)
  std::vector<Strengths> q;
};
QCoordinates compute_q_coordinates(const HyperbolicSystem& sys, const Configuration& u, const Configuration& w,
                                   const NewtonOptions& opt = {});

/// Distance functional between u and v (w = v + omega; pass w = v for omega = 0).
/// upsilon_u, upsilon_v are the Glimm functionals of u and v entering the weights W_i.
struct PhiInput {
  const Configuration* u = nullptr;
  const Configuration* v = nullptr;
  const Configuration* w = nullptr;  // defaults to v
  double upsilon_u = 0.0, upsilon_v = 0.0;
};
double compute_phi(const HyperbolicSystem& sys, const Boundary& bdry, const PhiInput& in, const FunctionalWeights& w);

}  // namespace wft
