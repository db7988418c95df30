#include "wft/piecewise.hpp"

#include <algorithm>
#include <cmath>

#include "wft/errors.hpp"

namespace wft {

PiecewiseConstant PiecewiseConstant::constant(const State& v) { return {{}, {v}}; }

PiecewiseConstant PiecewiseConstant::indicator(double a, double b, const State& inside, const State& outside) {
  if (!(a < b)) fail(ErrorKind::ValidationError, "indicator needs a < b");
  return {{a, b}, {outside, inside, outside}};
}

PiecewiseConstant PiecewiseConstant::from(std::vector<double> breaks, std::vector<State> values) {
  PiecewiseConstant p{std::move(breaks), std::move(values)};
  p.validate();
  return p;
}

void PiecewiseConstant::validate() const {
  if (values.size() != breaks.size() + 1)
    fail(ErrorKind::ValidationError, "piecewise constant needs breaks.size()+1 values");
  for (std::size_t k = 1; k < breaks.size(); ++k)
    if (!(breaks[k] > breaks[k - 1])) fail(ErrorKind::ValidationError, "breaks must be strictly increasing");
  for (const auto& v : values)
    if (v.size() != values.front().size()) fail(ErrorKind::ValidationError, "inconsistent state dimension");
}

std::size_t PiecewiseConstant::piece(double x) const {
  return static_cast<std::size_t>(std::upper_bound(breaks.begin(), breaks.end(), x) - breaks.begin());
}

const State& PiecewiseConstant::left_limit(double x) const {
  return values[static_cast<std::size_t>(std::lower_bound(breaks.begin(), breaks.end(), x) - breaks.begin())];
}

void PiecewiseConstant::simplify(double tol) {
  std::vector<double> nb;
  std::vector<State> nv{values.front()};
  for (std::size_t k = 0; k < breaks.size(); ++k) {
    if ((values[k + 1] - nv.back()).norm() <= tol) continue;
    nb.push_back(breaks[k]);
    nv.push_back(values[k + 1]);
  }
  breaks = std::move(nb);
  values = std::move(nv);
}

PiecewiseConstant combine(const PiecewiseConstant& a, const PiecewiseConstant& b,
                          const std::function<State(const State&, const State&)>& op) {
  PiecewiseConstant out;
  out.breaks.reserve(a.breaks.size() + b.breaks.size());
  std::merge(a.breaks.begin(), a.breaks.end(), b.breaks.begin(), b.breaks.end(), std::back_inserter(out.breaks));
  out.breaks.erase(std::unique(out.breaks.begin(), out.breaks.end()), out.breaks.end());
  out.values.reserve(out.breaks.size() + 1);
  std::size_t ia = 0, ib = 0;
  out.values.push_back(op(a.values[0], b.values[0]));
  for (double x : out.breaks) {
    while (ia < a.breaks.size() && a.breaks[ia] <= x) ++ia;
    while (ib < b.breaks.size() && b.breaks[ib] <= x) ++ib;
    out.values.push_back(op(a.values[ia], b.values[ib]));
  }
  return out;
}

PiecewiseConstant operator+(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  return combine(a, b, [](const State& x, const State& y) -> State { return x + y; });
}

PiecewiseConstant operator-(const PiecewiseConstant& a, const PiecewiseConstant& b) {
  return combine(a, b, [](const State& x, const State& y) -> State { return x - y; });
}

PiecewiseConstant operator*(double s, const PiecewiseConstant& a) {
  PiecewiseConstant out = a;
  for (auto& v : out.values) v *= s;
  return out;
}

State integral(const PiecewiseConstant& a, double lo, double hi) {
  State acc = State::Zero(a.dim());
  if (!(hi > lo)) return acc;
  double x = lo;
  std::size_t k = a.piece(lo);
  while (x < hi) {
    const double next = k < a.breaks.size() ? std::min(a.breaks[k], hi) : hi;
    acc += (next - x) * a.values[k];
    x = next;
    ++k;
  }
  return acc;
}

double l1_distance(const PiecewiseConstant& a, const PiecewiseConstant& b, double lo, double hi) {
  const PiecewiseConstant d = a - b;
  double acc = 0.0;
  const std::size_t m = d.breaks.size();
  for (std::size_t k = 0; k <= m; ++k) {
    const double x0 = std::max(lo, k == 0 ? -kInf : d.breaks[k - 1]);
    const double x1 = std::min(hi, k == m ? kInf : d.breaks[k]);
    if (!(x1 > x0)) continue;
    const double v = d.values[k].norm();
    if (v == 0.0) continue;
    if (std::isinf(x1 - x0)) fail(ErrorKind::ValidationError, "L1 distance of functions differing at infinity");
    acc += v * (x1 - x0);
  }
  return acc;
}

double l1_norm(const PiecewiseConstant& a, const State& base, double lo, double hi) {
  return l1_distance(a, PiecewiseConstant::constant(base), lo, hi);
}

double total_variation(const PiecewiseConstant& a, double lo, double hi) {
  double tv = 0.0;
  for (std::size_t k = 0; k < a.breaks.size(); ++k)
    if (a.breaks[k] > lo && a.breaks[k] <= hi) tv += (a.values[k + 1] - a.values[k]).norm();
  return tv;
}

PiecewiseConstant restrict_right(const PiecewiseConstant& a, double x0, const State& outside) {
  PiecewiseConstant out;
  out.values.push_back(outside);
  const std::size_t k0 = a.piece(x0);
  out.breaks.push_back(x0);
  out.values.push_back(a.values[k0]);
  for (std::size_t k = k0; k < a.breaks.size(); ++k) {
    out.breaks.push_back(a.breaks[k]);
    out.values.push_back(a.values[k + 1]);
  }
  out.simplify();
  return out;
}

}  // namespace wft
