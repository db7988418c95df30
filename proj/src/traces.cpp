#include "wft/traces.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "wft/errors.hpp"
#include "wft/systems.hpp"

namespace wft {

void CurveSpec::validate(const HyperbolicSystem& sys) const {
  if (auto msg = noncharacteristic_violation(sys, curve, ell_tilde, c))
    fail(ErrorKind::NotNonCharacteristic, "curve " + *msg);
}

namespace {

constexpr double kTol = 1e-12;

/// Fronts alive at increasing query times: t_birth <= t < t_death.
class AliveSweep {
 public:
  explicit AliveSweep(const std::vector<FrontLine>& h) : h_(h) {
    order_.resize(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) order_[k] = k;
    std::stable_sort(order_.begin(), order_.end(), [&](auto a, auto b) { return h[a].t_birth < h[b].t_birth; });
  }
  const std::vector<std::size_t>& at(double t) {
    while (next_ < order_.size() && h_[order_[next_]].t_birth <= t) alive_.push_back(order_[next_++]);
    alive_.erase(std::remove_if(alive_.begin(), alive_.end(), [&](auto k) { return h_[k].t_death <= t; }),
                 alive_.end());
    return alive_;
  }

 private:
  const std::vector<FrontLine>& h_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> alive_;
  std::size_t next_ = 0;
};

/// u(t, x+) from the fronts alive at t.
State value_at(const std::vector<FrontLine>& h, const std::vector<std::size_t>& alive, double t, double x,
               const State& base) {
  const FrontLine* left = nullptr;
  const FrontLine* right = nullptr;
  double xl = -kInf, xr = kInf;
  for (auto k : alive) {
    const double y = h[k].x(t);
    if (y <= x && y >= xl) {
      // among fronts at one point the last born is rightmost only by id; take the larger id on ties
      if (y > xl || !left || h[k].id > left->id) left = &h[k];
      xl = y;
    }
    if (y > x && y <= xr) {
      if (y < xr || !right || h[k].id < right->id) right = &h[k];
      xr = y;
    }
  }
  if (left) return left->right;
  if (right) return right->left;
  return base;
}

void add_crossings(const FrontLine& f, const PiecewiseLinearCurve& c, double T, std::vector<double>& out) {
  const double t0 = f.t_birth, t1 = std::min(f.t_death, T);
  for (std::size_t p = 0; p < c.pieces(); ++p) {
    const double a = std::max(t0, c.piece_start(p)), b = std::min(t1, c.piece_end(p));
    if (!(a <= b)) continue;
    const double m = c.piece_slope(p), s = f.speed;
    if (m == s) continue;
    // x_b + s (t - t_b) = C(t_p) + m (t - t_p)
    const double tp = c.piece_start(p);
    const double t = (c.at(tp) - m * tp - f.x_birth + s * f.t_birth) / (s - m);
    if (t >= a - kTol && t <= b + kTol) out.push_back(std::clamp(t, 0.0, T));
  }
}

std::vector<double> candidate_times(const Trajectory& traj, const PiecewiseLinearCurve& c, double T) {
  std::vector<double> ts{0.0, T};
  for (double k : c.kinks(0.0, T)) ts.push_back(k);
  for (const auto& f : traj.history) add_crossings(f, c, T, ts);
  for (const auto& e : traj.events)
    if (e.time <= T && (e.kind == EventKind::SplitStep || std::abs(e.location - c.at(e.time)) <= 1e-9))
      ts.push_back(e.time);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

}  // namespace

PiecewiseConstant sample_trace(const Trajectory& traj, const CurveSpec& curve) {
  if (!traj.system) fail(ErrorKind::ValidationError, "trajectory has no system");
  curve.validate(*traj.system);
  const double T = traj.T;
  const State& base = traj.system->base();
  for (double t : {0.0, T})
    if (curve.curve.at(t) < traj.boundary.gamma.at(t) - 1e-12)
      fail(ErrorKind::ValidationError, "curve leaves the domain x >= gamma(t)");
  const auto ts = candidate_times(traj, curve.curve, T);
  AliveSweep sweep(traj.history);
  PiecewiseConstant out;
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double tm = 0.5 * (ts[k] + ts[k + 1]);
    const State v = value_at(traj.history, sweep.at(tm), tm, curve.curve.at(tm), base);
    if (out.values.empty()) {
      out.values.push_back(v);
    } else if ((v - out.values.back()).norm() != 0.0) {
      out.breaks.push_back(ts[k]);
      out.values.push_back(v);
    }
  }
  if (out.values.empty()) {
    // T = 0: the initial configuration
    out.values.push_back(traj.initial.to_function().at(curve.curve.at(0.0)));
  }
  return out;
}

double trace_distance(const Trajectory& traj, const CurveSpec& g0, const CurveSpec& g1, double T) {
  if (T > traj.T) fail(ErrorKind::ValidationError, "trace horizon exceeds the trajectory");
  return l1_distance(sample_trace(traj, g0), sample_trace(traj, g1), 0.0, T);
}

double trace_continuity_probe(const Trajectory& traj, const CurveSpec& curve, double T, double e, int nodes) {
  if (e <= 0.0) return 0.0;
  const auto ref = sample_trace(traj, curve);
  double acc = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const double x = e * (k + 0.5) / nodes;
    CurveSpec shifted = curve;
    shifted.curve = curve.curve.shifted(-x);
    acc += l1_distance(sample_trace(traj, shifted), ref, 0.0, T);
  }
  return acc / nodes;
}

std::vector<XiSample> compute_xi(const Trajectory& traj, const CurveSpec& curve, const FunctionalWeights& w) {
  const HyperbolicSystem& sys = *traj.system;
  curve.validate(sys);
  const int n = sys.n();
  const double T = traj.T;
  const auto trace = sample_trace(traj, curve);
  std::vector<double> ts{0.0};
  for (const auto& e : traj.events)
    if (e.time <= T) ts.push_back(e.time);
  for (const auto& f : traj.history) add_crossings(f, curve.curve, T, ts);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  AliveSweep sweep(traj.history);
  std::vector<XiSample> out;
  std::size_t ev = 0;
  double ups = traj.functionals.empty() ? 0.0 : traj.functionals.front().Upsilon;
  for (double t : ts) {
    while (ev < traj.events.size() && traj.events[ev].time <= t) ups = traj.events[ev++].Upsilon;
    XiSample s;
    s.time = t;
    const double G = curve.curve.at(t), g = traj.boundary.gamma.at(t);
    for (auto k : sweep.at(t)) {
      const auto& f = traj.history[k];
      const double x = f.x(t);
      // a front exactly on Gamma counts as already on the side it is heading to
      const bool right_of = x > G + kTol || (std::abs(x - G) <= kTol && f.speed > curve.curve.slope(t));
      if (f.family <= curve.ell_tilde && f.family <= n) {
        if (right_of) s.outside += std::abs(f.strength);
      } else if (!right_of && x >= g - kTol) {
        s.inside += std::abs(f.strength);
      }
    }
    s.Upsilon = ups;
    s.trace_tv = total_variation(trace, 0.0, t);
    s.Xi = w.Kcheck * (s.outside + s.inside + w.Khat * s.Upsilon) + s.trace_tv;
    out.push_back(s);
  }
  return out;
}

RestrictionReport restriction_experiment(const HyperbolicSystem& sys, const Boundary& bdry, const SolverParams& params,
                                         const PiecewiseConstant& u0, const CurveSpec& gamma_tilde, double T,
                                         const std::vector<double>& snapshot_times) {
  RestrictionReport r;
  RunOptions opt;
  opt.T = T;
  opt.snapshot_times = snapshot_times;
  r.big = run(sys, bdry, params, {}, u0, opt);
  const auto trace = sample_trace(r.big, gamma_tilde);
  r.harvested_data = trace;
  for (auto& v : r.harvested_data.values) v = bdry.bmap->eval(v);
  r.harvested_data.simplify();

  Boundary rb = bdry;
  rb.gamma = gamma_tilde.curve;
  rb.gdata = r.harvested_data;
  rb.margin_c = gamma_tilde.c;
  rb.validate(sys);
  const auto u0r = restrict_right(u0, gamma_tilde.curve.at(0.0), sys.base());
  r.restricted = run(sys, rb, params, {}, u0r, opt);

  for (double t : snapshot_times) {
    const auto* a = r.big.snapshot_at(t);
    const auto* b = r.restricted.snapshot_at(t);
    if (!a || !b) continue;
    const double d = l1_distance(a->to_function(), b->to_function(), gamma_tilde.curve.at(t), kInf);
    r.discrepancy = std::max(r.discrepancy, d);
  }
  return r;
}

NonuniquenessReport nonuniqueness_experiment(double coef, double eps_split, double eps_ft, int N) {
  LinearAdvection sys(1.0);
  const State zero = State::Zero(1);
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::constant(zero);
  b.bmap = AffineBoundaryMap::identity(sys.base());
  b.ell = 0;
  b.margin_c = 0.5;
  NonlocalWindowSource src(0, 1, 3, 4, coef, sys.base());
  SolverParams p;
  p.epsilon = p.rho = eps_ft;
  SplittingParams sp;
  sp.eps_split = eps_split;
  sp.N = N;
  sp.T = 1.0;
  RunOptions opt;
  opt.T = 1.0;
  const auto u0 = PiecewiseConstant::indicator(0, 1, State::Constant(1, 1.0), zero);
  auto big = euler_polygonal(sys, b, src, p, {}, sp, u0, opt);

  NonuniquenessReport r;
  r.mass_on_34 = integral(big.traj.final.to_function(), 3, 4)(0);
  CurveSpec gt{PiecewiseLinearCurve(2.0, 0.0), 0, 0.5};
  r.trace = sample_trace(big.traj, gt);
  for (const auto& v : r.trace.values) r.trace_sup = std::max(r.trace_sup, v.norm());

  Boundary rb = b;
  rb.gamma = gt.curve;
  rb.gdata = r.trace;  // b is the identity here
  auto small = euler_polygonal(sys, rb, src, p, {}, sp, restrict_right(u0, 2.0, zero), opt);
  r.restricted_norm = l1_norm(small.traj.final.to_function(), zero);
  return r;
}

}  // namespace wft
