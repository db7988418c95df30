#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "wft/piecewise.hpp"
#include "wft/system.hpp"

namespace wft {

/// Continuous piecewise-linear t -> x. Knots (t_k, x_k); after the last knot
/// the curve continues with `tail_slope`; before the first with the first slope.
class PiecewiseLinearCurve {
 public:
  PiecewiseLinearCurve() : PiecewiseLinearCurve(0.0, 0.0) {}
  PiecewiseLinearCurve(double x0, double slope);
  PiecewiseLinearCurve(std::vector<double> times, std::vector<double> positions, double tail_slope);

  double at(double t) const;
  /// Right derivative.
  double slope(double t) const;
  std::size_t pieces() const { return times_.size(); }
  double piece_start(std::size_t k) const { return times_[k]; }
  double piece_end(std::size_t k) const;
  double piece_slope(std::size_t k) const { return slopes_[k]; }
  std::size_t piece_of(double t) const;
  PiecewiseLinearCurve shifted(double dx) const;
  /// Kink times strictly inside (a, b).
  std::vector<double> kinks(double a, double b) const;

 private:
  std::vector<double> times_;
  std::vector<double> positions_;
  std::vector<double> slopes_;
};

/// C^1 boundary map b: Omega -> R^{n-l}, b(base) = 0.
class BoundaryMap {
 public:
  virtual ~BoundaryMap() = default;
  virtual int out_dim() const = 0;
  virtual Eigen::VectorXd eval(const State& u) const = 0;
  virtual Matrix jacobian(const State& u) const;
  virtual std::string describe() const = 0;
};

/// b(u) = B (u - u_ref).
class AffineBoundaryMap final : public BoundaryMap {
 public:
  AffineBoundaryMap(Matrix B, State ref, std::string label);
  int out_dim() const override { return static_cast<int>(B_.rows()); }
  Eigen::VectorXd eval(const State& u) const override { return B_ * (u - ref_); }
  Matrix jacobian(const State&) const override { return B_; }
  std::string describe() const override { return label_; }

  static std::shared_ptr<AffineBoundaryMap> identity(const State& base);
  static std::shared_ptr<AffineBoundaryMap> components(const std::vector<int>& idx, const State& base);
  /// p-system: b = (q - q*) - s (rho - rho*).
  static std::shared_ptr<AffineBoundaryMap> relative_flux(double frame_speed, const State& base);

 private:
  Matrix B_;
  State ref_;
  std::string label_;
};

struct Boundary {
  PiecewiseLinearCurve gamma;
  PiecewiseConstant gdata;  // t -> R^{n-l}
  std::shared_ptr<const BoundaryMap> bmap;
  int ell = 0;
  double margin_c = 0.1;

  Eigen::VectorXd g(double t) const { return gdata.at(t); }
  /// Checks the non-characteristic band, b(base) = 0 and the determinant condition.
  void validate(const HyperbolicSystem& sys) const;
};

/// det[Db(base) r_{l+1}(base) ... Db(base) r_n(base)].
double boundary_determinant(const HyperbolicSystem& sys, const Boundary& bdry);

/// Diagnostic naming the violated speed band, or nullopt if every piece of the curve
/// satisfies lambda_l^max + c <= slope <= lambda_{l+1}^min - c.
std::optional<std::string> noncharacteristic_violation(const HyperbolicSystem& sys,
                                                       const PiecewiseLinearCurve& curve, int ell, double c);

}  // namespace wft
