#pragma once

#include "wft/front_tracking.hpp"
#include "wft/splitting.hpp"

namespace wft {

struct CurveSpec {
  PiecewiseLinearCurve curve;
  int ell_tilde = 0;
  double c = 0.1;

  /// Throws NotNonCharacteristic naming the violated speed band.
  void validate(const HyperbolicSystem& sys) const;
};

/// t -> u(t, Gamma(t)+) on [0, traj.T], exact from the recorded front history.
/// Constant extension outside [0, T]. The trajectory must have been recorded with history.
PiecewiseConstant sample_trace(const Trajectory& traj, const CurveSpec& curve);

/// int_0^T |u(t, Gamma0(t)) - u(t, Gamma1(t))| dt.
double trace_distance(const Trajectory& traj, const CurveSpec& g0, const CurveSpec& g1, double T);

/// (1/e) int_0^e int_0^T |u(t, Gamma(t) - x) - u(t, Gamma(t))| dt dx, by midpoint quadrature in x.
double trace_continuity_probe(const Trajectory& traj, const CurveSpec& curve, double T, double e, int nodes = 32);

struct XiSample {
  double time = 0.0;
  double outside = 0.0;  // families <= l~ at x >= Gamma
  double inside = 0.0;   // families > l~ (non-physical included) on [gamma, Gamma]
  double Upsilon = 0.0;
  double trace_tv = 0.0;
  double Xi = 0.0;
};
/// Curve functional after every event and crossing.
std::vector<XiSample> compute_xi(const Trajectory& traj, const CurveSpec& curve, const FunctionalWeights& w);

struct RestrictionReport {
  double discrepancy = 0.0;          // sup over snapshot times of the L1 distance on [gamma~(t), inf)
  PiecewiseConstant harvested_data;  // g~ = b(u(t, gamma~(t)+))
  Trajectory big, restricted;
};

/// Solves on [gamma, inf), harvests g~ along gamma~ and solves again on [gamma~, inf).
RestrictionReport restriction_experiment(const HyperbolicSystem& sys, const Boundary& bdry, const SolverParams& params,
                                         const PiecewiseConstant& u0, const CurveSpec& gamma_tilde, double T,
                                         const std::vector<double>& snapshot_times);

struct NonuniquenessReport {
  double mass_on_34 = 0.0;       // int_3^4 u(1, x) dx of the full problem
  double restricted_norm = 0.0;  // ||u~(1)||_L1 of the problem restricted to x >= 2
  double trace_sup = 0.0;        // sup of |u(t, 2+)| on [0, 1]
  PiecewiseConstant trace;
};

/// u_t + u_x = coef (int_0^1 u) chi_[3,4], u(t, 0) = 0, u(0) = chi_[0,1], up to T = 1.
NonuniquenessReport nonuniqueness_experiment(double coef, double eps_split, double eps_ft, int N);

}  // namespace wft
