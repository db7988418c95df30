#pragma once

#include <cstdint>
#include <vector>

#include "wft/boundary.hpp"
#include "wft/riemann.hpp"
#include "wft/weights.hpp"

namespace wft {

/// One sampled instance of an estimate lhs <= C * rhs.
struct EstimateSample {
  double lhs = 0.0, rhs = 0.0;
  double ratio() const { return rhs > 0 ? lhs / rhs : 0.0; }
};

struct SampleOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 1;
  double state_amp = 0.05;     // |u - base| per component
  double strength_amp = 0.05;  // |sigma|
  double data_amp = 0.05;      // |g+ - g-|
  bool parallel = true;
};

/// Boundary interactions: trace u0 with boundary waves sigma_{>l} = E_b(u0, g-), incident waves
/// sigma_1..sigma_l to the right. lhs = sum_{i>l} |s~_i - s_i| with s~ = E_b(u_r, g+),
/// rhs = sum_{i<=l} |sigma_i| + |g+ - g-|.
std::vector<EstimateSample> sample_boundary_interactions(const HyperbolicSystem& sys, const Boundary& bdry,
                                                         const SampleOptions& opt);
/// Reflection only (g fixed, trace consistent): lhs = sum |outgoing|, rhs = sum |incident|.
std::vector<EstimateSample> sample_boundary_reflections(const HyperbolicSystem& sys, const Boundary& bdry,
                                                        const SampleOptions& opt);
/// Data jump only: lhs = sum |outgoing|, rhs = |g+ - g-|.
std::vector<EstimateSample> sample_data_jumps(const HyperbolicSystem& sys, const Boundary& bdry,
                                              const SampleOptions& opt);
/// Interior interactions of approaching waves: lhs = sum |s~ - s' e_i - s'' e_j|, rhs = |s' s''|.
std::vector<EstimateSample> sample_interior_interactions(const HyperbolicSystem& sys, const SampleOptions& opt);

/// Largest ratio over the samples.
double fit_constant(const std::vector<EstimateSample>& s, std::size_t begin = 0, std::size_t end = SIZE_MAX);

struct Validation {
  double C = 0.0;             // fitted on the first half
  double worst_ratio = 0.0;   // over the held-out half, relative to C
  std::size_t violations = 0; // held-out samples with lhs > margin * C * rhs
  bool ok = false;
};
Validation fit_and_validate(const std::vector<EstimateSample>& s, double margin = 1.2);

struct FittedConstants {
  double C_int = 0.0, C_b = 0.0, C_g = 0.0;
  FunctionalWeights weights;
};
/// Weights from sampled constants: K = 4 C_b + 1, H1 = 3 C_g + 1, H2 = 4 C_int K + 1, delta0 = 1/(2 H2),
/// Kbar = C_b / c + 1, Kcheck = 1.25 max |r_i| over the state box, Khat = 1; each constant with a 1.25
/// safety factor.
FittedConstants fit_weights(const HyperbolicSystem& sys, const Boundary& bdry, const SampleOptions& opt = {});

}  // namespace wft
