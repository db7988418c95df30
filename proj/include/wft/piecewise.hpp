#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wft/state.hpp"

namespace wft {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Right-continuous piecewise-constant map R -> R^n.
/// values[0] on (-inf, breaks[0]), values[k] on [breaks[k-1], breaks[k]), values.back() on [breaks.back(), inf).
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<State> values;

  static PiecewiseConstant constant(const State& v);
  /// `inside` on [a, b), `outside` elsewhere.
  static PiecewiseConstant indicator(double a, double b, const State& inside, const State& outside);
  /// Builds from strictly increasing breaks and breaks.size()+1 values; validates.
  static PiecewiseConstant from(std::vector<double> breaks, std::vector<State> values);

  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }
  std::size_t piece(double x) const;
  const State& at(double x) const { return values[piece(x)]; }
  const State& left_limit(double x) const;
  std::size_t jumps() const { return breaks.size(); }

  /// Removes breaks across which the value does not change (within tol).
  void simplify(double tol = 0.0);
  void validate() const;
};

/// Pointwise op on the common refinement.
PiecewiseConstant combine(const PiecewiseConstant& a, const PiecewiseConstant& b,
                          const std::function<State(const State&, const State&)>& op);
PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b);
PiecewiseConstant operator-(const PiecewiseConstant& a, const PiecewiseConstant& b);
PiecewiseConstant operator*(double s, const PiecewiseConstant& a);

/// Integral of a over [lo, hi] (finite bounds).
State integral(const PiecewiseConstant& a, double lo, double hi);
/// int_lo^hi |a - b| dx with the Euclidean norm; infinite bounds allowed if a, b agree at infinity.
double l1_distance(const PiecewiseConstant& a, const PiecewiseConstant& b, double lo = -kInf, double hi = kInf);
/// || a - base ||_L1.
double l1_norm(const PiecewiseConstant& a, const State& base, double lo = -kInf, double hi = kInf);
/// Sum of Euclidean jump sizes at breaks in (lo, hi].
double total_variation(const PiecewiseConstant& a, double lo = -kInf, double hi = kInf);
/// Restriction: value `outside` on (-inf, x0), a on [x0, inf).
PiecewiseConstant restrict_right(const PiecewiseConstant& a, double x0, const State& outside);

}  // namespace wft
