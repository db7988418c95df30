#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wft/state.hpp"

namespace wft {

enum class FieldType { GenuinelyNonlinear, LinearlyDegenerate };
enum class CurveProvider { Analytic, Numeric };

/// Axis-aligned admissible box.
struct Box {
  State lo, hi;

  bool contains(const State& u, double tol = 1e-12) const;
  /// Tensor grid with `per_axis` points per coordinate (corners included).
  std::vector<State> grid(int per_axis) const;
};

struct Eigensystem {
  Eigen::VectorXd values;  // strictly increasing
  Matrix right;            // columns r_i
  Matrix left;             // rows l_i, left * right = I
};

/// A point on a wave curve together with the speed of the front it generates.
struct CurvePoint {
  State state;
  double speed = 0.0;
};

/// n x n strictly hyperbolic system with per-family GNL/LD fields.
/// Families are numbered 1..n everywhere in the public API.
class HyperbolicSystem {
 public:
  HyperbolicSystem(int n, std::vector<FieldType> fields, Box omega, State base);
  virtual ~HyperbolicSystem() = default;

  virtual std::string name() const = 0;
  virtual State flux(const State& u) const = 0;
  /// Default: central finite differences of the flux.
  virtual Matrix jacobian(const State& u) const;
  /// Default: numeric eigen-solve, GNL vectors scaled to grad(lambda).r = 1, LD to unit length.
  virtual Eigensystem eigen(const State& u) const;

  virtual bool has_analytic_curves() const { return false; }
  virtual State analytic_rarefaction(const State& u, int family, double sigma) const;
  virtual CurvePoint analytic_shock(const State& u, int family, double sigma) const;

  int n() const { return n_; }
  FieldType field(int family) const { return fields_.at(family - 1); }
  bool gnl(int family) const { return field(family) == FieldType::GenuinelyNonlinear; }
  const Box& omega() const { return omega_; }
  const State& base() const { return base_; }
  State zero() const { return base_; }

  double lambda(const State& u, int family) const { return eigen(u).values(family - 1); }
  double lambda_hat() const { return lambda_hat_; }
  std::pair<double, double> speed_bounds(int family) const { return bounds_.at(family - 1); }

  CurveProvider provider(int family) const { return providers_.at(family - 1); }
  void set_provider(int family, CurveProvider p);
  void set_all_providers(CurveProvider p);

 protected:
  /// Samples omega to fill speed bounds and lambda_hat and checks the
  /// hyperbolicity invariants. Derived constructors call this last.
  void finalize(int grid_per_axis = 11, double hat_factor = 1.25);
  /// Finite-difference directional derivative of lambda_i along r (Richardson).
  double lambda_derivative(const State& u, int family, const State& r) const;

 private:
  int n_;
  std::vector<FieldType> fields_;
  Box omega_;
  State base_;
  std::vector<std::pair<double, double>> bounds_;
  std::vector<CurveProvider> providers_;
  double lambda_hat_ = 0.0;
};

enum class Check { Yes, No };

/// R_i(sigma)(u). For LD fields sigma is arc length.
State rarefaction_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma,
                        Check check = Check::Yes);
/// S_i(sigma)(u) with the Rankine-Hugoniot speed.
CurvePoint shock_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma,
                       Check check = Check::Yes);
/// psi_i: R for sigma >= 0, S for sigma < 0.
State lax_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma,
                Check check = Check::Yes);
/// psi-bar_i: S for sigma >= 0, R for sigma < 0; psi-bar_i(-s) inverts psi_i(s).
State inverse_lax_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma,
                        Check check = Check::Yes);
/// psi_i(sigma)(u) plus the speed of the single front representing it:
/// shock speed, lambda of the right state for rarefactions, lambda(u) for LD fields.
CurvePoint lax_step(const HyperbolicSystem& sys, const State& u, int family, double sigma,
                    Check check = Check::Yes);
/// psi_n(s_n) o ... o psi_1(s_1)(u)
State glue_lax(const HyperbolicSystem& sys, const State& u, const Strengths& sigma,
               Check check = Check::Yes);
/// S_n(q_n) o ... o S_1(q_1)(u)
State glue_shock(const HyperbolicSystem& sys, const State& u, const Strengths& q,
                 Check check = Check::Yes);

/// Eigen data at u (free-function form).
Eigensystem eigen_decompose(const HyperbolicSystem& sys, const State& u);

/// Speed of a physical front (family, strength) joining left to right.
double front_speed(const HyperbolicSystem& sys, int family, double sigma, const State& left,
                   const State& right);

}  // namespace wft
