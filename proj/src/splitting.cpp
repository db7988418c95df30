#include "wft/splitting.hpp"

#include <cmath>

#include "wft/errors.hpp"
#include "wft/kernels.hpp"

namespace wft {

NonlocalWindowSource::NonlocalWindowSource(double a, double b, double c, double d, double coef, State base)
    : a_(a), b_(b), c_(c), d_(d), coef_(coef), base_(std::move(base)) {
  if (!(a < b) || !(c < d)) fail(ErrorKind::ValidationError, "nonlocal-window needs a < b and c < d");
}

PiecewiseConstant NonlocalWindowSource::apply(const PiecewiseConstant& u, double) const {
  const State m = coef_ * (integral(u, a_, b_) - (b_ - a_) * base_);
  const State zero = State::Zero(base_.size());
  if (m.norm() == 0.0) return PiecewiseConstant::constant(zero);
  return PiecewiseConstant::indicator(c_, d_, m, zero);
}

SourceRegistry& SourceRegistry::global() {
  static SourceRegistry r;
  return r;
}

SourceRegistry::SourceRegistry() {
  add("zero", [](const nlohmann::json&, const State& base) { return std::make_unique<ZeroSource>(base); });
  add("nonlocal-window", [](const nlohmann::json& p, const State& base) {
    return std::make_unique<NonlocalWindowSource>(p.value("a", 0.0), p.value("b", 1.0), p.value("c", 3.0),
                                                  p.value("d", 4.0), p.value("coef", 1.0), base);
  });
}

void SourceRegistry::add(const std::string& name, Factory f) { f_[name] = std::move(f); }

std::unique_ptr<SourceOp> SourceRegistry::make(const std::string& name, const nlohmann::json& params,
                                               const State& base) const {
  auto it = f_.find(name);
  if (it == f_.end()) fail(ErrorKind::ValidationError, "unknown source '" + name + "'");
  return it->second(params, base);
}

std::vector<std::string> SourceRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : f_) out.push_back(k);
  return out;
}

PiecewiseConstant project_PiN(const PiecewiseConstant& u, int N) {
  if (N < 1) fail(ErrorKind::ValidationError, "projection resolution must be positive");
  const long n = N, k0 = -1 - n * n, m = 2 * n * n + 1;
  const Matrix avg = kernels::cell_averages_omp(u, k0, n, static_cast<std::size_t>(m));
  const State zero = State::Zero(u.dim());
  PiecewiseConstant out;
  out.values.push_back(zero);
  for (long k = 0; k < m; ++k) {
    out.breaks.push_back(static_cast<double>(k0 + k) / static_cast<double>(n));
    out.values.push_back(avg.col(k));
  }
  out.breaks.push_back(static_cast<double>(k0 + m) / static_cast<double>(n));
  out.values.push_back(zero);
  out.simplify();
  return out;
}

void SplittingParams::validate() const {
  if (!(eps_split > 0)) fail(ErrorKind::ValidationError, "eps_split must be positive");
  if (N < 1) fail(ErrorKind::ValidationError, "N must be positive");
  if (!(T >= 0)) fail(ErrorKind::ValidationError, "T must be non-negative");
  if (!(M > 0) || !(delta > 0) || !(C >= 0)) fail(ErrorKind::ValidationError, "bad domain budget");
}

PiecewiseConstant source_increment(const FrontTracker& ft, const SourceOp& src, double dt, const SplittingParams& sp) {
  const PiecewiseConstant u = ft.configuration().to_function();
  PiecewiseConstant g = src.apply(u, ft.time());
  if (sp.project) g = project_PiN(g, sp.N);
  return dt * g;
}

EventRecord splitting_step(FrontTracker& ft, const SourceOp& src, double dt, const SplittingParams& sp) {
  ft.advance_to(ft.time() + dt);
  return ft.apply_increment(source_increment(ft, src, dt, sp));
}

namespace {

void check_domain(const SplittingParams& sp, double t, double ups, double l1, double l1_0) {
  const double M = std::isfinite(sp.M) ? sp.M : l1_0;
  if (l1 > M * std::exp(sp.C * t) + sp.C * t + 1e-12)
    fail(ErrorKind::DomainExceeded, "L1 norm " + std::to_string(l1) + " left the domain at t = " + std::to_string(t));
  if (std::isfinite(sp.delta) && ups > sp.delta - sp.C * (sp.T - t) + 1e-12)
    fail(ErrorKind::DomainExceeded, "Glimm functional " + std::to_string(ups) + " left the domain at t = " +
                                        std::to_string(t));
}

}  // namespace

PolygonalResult euler_polygonal(const HyperbolicSystem& sys, const Boundary& bdry, const SourceOp& src,
                                const SolverParams& params, const FunctionalWeights& w, const SplittingParams& sp,
                                const PiecewiseConstant& u0, const RunOptions& opt) {
  sp.validate();
  FrontTracker ft(sys, bdry, params, w);
  ft.set_recording(opt.record_history, opt.record_events);
  ft.init(u0, 0.0);
  PolygonalResult res;
  Trajectory& traj = res.traj;
  traj.system = &sys;
  traj.boundary = bdry;
  traj.params = params;
  traj.weights = w;
  traj.T = opt.T;
  traj.initial = ft.configuration();
  traj.functionals.push_back(ft.sample());
  for (double s : opt.snapshot_times)
    if (s == 0.0) traj.snapshots.push_back({traj.initial, false});

  const bool budget = std::isfinite(sp.M) || std::isfinite(sp.delta);
  auto log_step = [&]() {
    const FunctionalSample s = ft.sample();
    res.steps.push_back({s.time, s.Upsilon, s.l1, s.fronts});
    if (budget) check_domain(sp, s.time, s.Upsilon, s.l1, res.steps.front().l1);
  };
  log_step();

  const double T = opt.T, eps = sp.eps_split;
  const auto k = static_cast<long>(std::floor(T / eps + 1e-9));
  for (long h = 0; h <= k; ++h) {
    const double t0 = static_cast<double>(h) * eps;
    const double t1 = h < k ? std::min(static_cast<double>(h + 1) * eps, T) : T;
    if (t1 <= t0) break;
    RunOptions o = opt;
    o.T = t1;
    o.snapshot_times.clear();
    for (double s : opt.snapshot_times)
      if (s > t0 && s < t1) o.snapshot_times.push_back(s);
    drive(ft, o, traj);
    const auto inc = source_increment(ft, src, t1 - t0, sp);
    ft.apply_increment(inc);
    traj.functionals.push_back(ft.sample());
    for (double s : opt.snapshot_times)
      if (s == t1) traj.snapshots.push_back({ft.configuration(), true});
    log_step();
  }
  traj.final = ft.configuration();
  traj.history = ft.take_history();
  traj.events = ft.take_events();
  return res;
}

PiecewiseConstant local_flow(const HyperbolicSystem& sys, const Boundary& bdry, const SourceOp& src,
                             const SolverParams& params, const SplittingParams& sp, const PiecewiseConstant& u,
                             double t0, double t, FlowVariant variant) {
  FrontTracker ft(sys, bdry, params);
  ft.set_recording(false, false);
  ft.init(u, t0);
  PiecewiseConstant g;
  if (variant == FlowVariant::Tangent) g = src.apply(ft.configuration().to_function(), t0);
  ft.advance_to(t0 + t);
  if (t == 0.0) return ft.configuration().to_function();
  if (variant == FlowVariant::Evolved) g = src.apply(ft.configuration().to_function(), t0 + t);
  if (sp.project) g = project_PiN(g, sp.N);
  ft.apply_increment(t * g);
  return ft.configuration().to_function();
}

double verify_local_flow(const HyperbolicSystem& sys, const Boundary& bdry, const SourceOp& src,
                         const SolverParams& params, const SplittingParams& sp, const PiecewiseConstant& u, double t0,
                         int k, double tau, FlowVariant variant) {
  if (k < 0 || tau < 0) fail(ErrorKind::ValidationError, "local-flow check needs k >= 0 and tau >= 0");
  if (tau == 0.0) return 0.0;
  const auto a = local_flow(sys, bdry, src, params, sp, u, t0, tau, variant);
  const auto two = local_flow(sys, bdry, src, params, sp, a, t0 + tau, k * tau, variant);
  const auto one = local_flow(sys, bdry, src, params, sp, u, t0, (k + 1) * tau, variant);
  return l1_distance(two, one);
}

}  // namespace wft
