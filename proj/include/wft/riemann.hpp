#pragma once

#include <vector>

#include "wft/boundary.hpp"
#include "wft/system.hpp"

namespace wft {

enum class WaveKind { Shock, Contact, Rarefaction };

struct ElementaryWave {
  int family = 1;
  WaveKind kind = WaveKind::Contact;
  double strength = 0.0;
  double speed_lo = 0.0;  // equals speed_hi except for rarefactions
  double speed_hi = 0.0;
  State left, right;
};

struct RiemannSolution {
  const HyperbolicSystem* system = nullptr;
  State left, right;
  Strengths strengths;
  std::vector<ElementaryWave> fan;
};

struct BoundaryRiemannSolution {
  State trace_state;
  Strengths strengths;  // component k belongs to family l+1+k
  std::vector<ElementaryWave> fan;
};

enum class CurveKind { Lax, Shock };

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  double trust_radius = 1.0;  // max |sigma_i| accepted
};

/// sigma = E(u-, u+): Psi(sigma)(u-) = u+.
Strengths riemann_strengths(const HyperbolicSystem& sys, const State& um, const State& up,
                            const NewtonOptions& opt = {});
/// q with S(q)(u) = w, S composing the shock curves of families 1..n.
Strengths shock_strengths(const HyperbolicSystem& sys, const State& u, const State& w, const NewtonOptions& opt = {});
RiemannSolution solve_riemann(const HyperbolicSystem& sys, const State& um, const State& up,
                              const NewtonOptions& opt = {});
/// Fan of psi_n(s_n) o ... o psi_1(s_1) starting at `left`; the last wave ends exactly at `right`.
std::vector<ElementaryWave> build_fan(const HyperbolicSystem& sys, const State& left, const Strengths& sigma,
                                      int first_family, const State& right);

/// E_b^sigma (Lax) or E_b^q (Shock): trace state u with b(u) = g_o joined to u_o
/// by waves of families l+1..n only.
BoundaryRiemannSolution solve_boundary_riemann(const HyperbolicSystem& sys, const Boundary& bdry,
                                               const State& u_o, const Eigen::VectorXd& g_o,
                                               CurveKind kind = CurveKind::Lax, const NewtonOptions& opt = {});
/// State reached from u_o by undoing the outgoing waves: psi-bar_{l+1}(-s_{l+1}) o ... o psi-bar_n(-s_n)(u_o)
/// (or the S-curve analogue).
State boundary_trace_of(const HyperbolicSystem& sys, int ell, const State& u_o, const Strengths& s,
                        CurveKind kind, Check check = Check::No);

State evaluate_fan(const RiemannSolution& sol, double xi);
State evaluate_fan(const HyperbolicSystem& sys, const std::vector<ElementaryWave>& fan, const State& left,
                   double xi);

}  // namespace wft
