// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "../oracles/window_mass.hpp"
#include "wft/errors.hpp"
#include "wft/estimates.hpp"
#include "wft/scenario.hpp"
#include "wft/systems.hpp"

using namespace wft;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

State s1(double a) { return State::Constant(1, a); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Scenario psystem(double eps) {
  auto s = load_scenario("psystem-boundary");
  s.solver.epsilon = s.solver.rho = eps;
  return s;
}

CurveSpec vertical(double x, int ell, double c) { return {PiecewiseLinearCurve(x, 0.0), ell, c}; }

// Exact solution of u_t + u_x = 0 on x > 0 with inflow data g: u0(x - t) if x >= t, else g(t - x).
PiecewiseConstant advection_oracle(const PiecewiseConstant& u0, const PiecewiseConstant& g, double T) {
  std::vector<double> br;
  std::vector<State> v;
  // x in [0, T): value g(T - x); breaks of g at s map to x = T - s, right-continuity flips
  std::vector<double> gx;
  for (double s : g.breaks)
    if (s > 0 && s < T) gx.push_back(T - s);
  std::sort(gx.begin(), gx.end());
  br.push_back(0.0);
  v.push_back(s1(0));
  double x = 0.0;
  for (double b : gx) {
    v.push_back(g.at(T - 0.5 * (x + b)));
    br.push_back(b);
    x = b;
  }
  v.push_back(g.at(T - 0.5 * (x + T)));
  br.push_back(T);
  for (double b : u0.breaks)
    if (b + T > T) {
      v.push_back(u0.at(0.5 * (br.back() - T + b)));
      br.push_back(b + T);
    }
  v.push_back(u0.values.back());
  auto out = PiecewiseConstant::from(br, v);
  out.simplify();
  return out;
}

Verdict c1_advection() {
  LinearAdvection a(1.0);
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::from({1.0, 2.0, 2.7}, {s1(0), s1(0.5), s1(-0.25), s1(0)});
  b.bmap = AffineBoundaryMap::identity(a.base());
  b.ell = 0;
  b.margin_c = 0.5;
  const auto u0 = PiecewiseConstant::from({0.5, 1.0, 2.0, 3.5}, {s1(0), s1(1), s1(0.2), s1(-0.4), s1(0)});
  const double T = 5.0;
  const auto want = advection_oracle(u0, b.gdata, T);
  Verdict v{true, ""};
  for (double eps : {0.1, 0.01}) {
    SolverParams p;
    p.epsilon = p.rho = eps;
    RunOptions o;
    o.T = T;
    const auto t0 = std::chrono::steady_clock::now();
    const auto tr = run(a, b, p, {}, u0, o);
    const double rt = seconds_since(t0);
    const double err = l1_distance(tr.final.to_function(), want, 0.0);
    v.pass = v.pass && err <= 2 * eps && rt < 1.0;
    v.detail += fmt("eps=%g err=%.2e (<=%.2e) time=%.3fs; ", eps, err, 2 * eps, rt);
  }
  return v;
}

Verdict c2_glimm() {
  const double eps = 0.01;
  const auto s = psystem(eps);
  const auto u0 = s.initial_datum();
  const auto tr = run(*s.system, s.boundary, s.solver, s.weights, u0, s.run);
  std::size_t bad_u = 0, bad_q = 0, bad_np = 0, coll = 0;
  double worst_u = -kInf, worst_np = 0;
  for (const auto& e : tr.events) {
    worst_np = std::max(worst_np, e.np_total);
    if (e.np_total > 2 * eps) ++bad_np;
    if (e.kind == EventKind::Initial) continue;
    worst_u = std::max(worst_u, e.dUpsilon);
    if (e.dUpsilon > 1e-9) ++bad_u;
    if (e.kind == EventKind::FrontCollision && e.physical_pair) {
      ++coll;
      if (e.dQ > -0.5 * e.product + 1e-12) ++bad_q;
    }
  }
  const bool setup = u0.jumps() == 20 && total_variation(u0) <= 0.3 + 1e-12 && s.boundary.gdata.jumps() == 5;
  return {setup && bad_u == 0 && bad_q == 0 && bad_np == 0 && coll > 0,
          fmt("events=%zu collisions=%zu dUpsilon max=%.1e (viol %zu) dQ viol=%zu NP max=%.1e (viol %zu)",
              tr.events.size(), coll, worst_u, bad_u, bad_q, worst_np, bad_np)};
}

Verdict c3_convergence() {
  const auto s = load_scenario("psystem-smooth");
  const auto r = convergence_study(s, {0.04, 0.02, 0.01, 0.005});
  std::ostringstream os;
  for (double d : r.distances) os << d << ' ';
  os << "ratios:";
  for (double q : r.ratios) os << ' ' << q;
  return {r.strictly_decreasing && r.max_ratio <= 0.75, "distances " + os.str()};
}

PiecewiseConstant bump(const PiecewiseConstant& g, double delta) {
  const int m = g.dim();
  const auto add = PiecewiseConstant::indicator(0.5, 0.5 + delta / 0.05, State::Constant(m, 0.05), State::Zero(m));
  return g + add;
}

Verdict c4_g_lipschitz() {
  std::vector<double> L;
  std::vector<std::vector<double>> dists;
  for (double eps : {0.02, 0.01}) {
    const auto s = psystem(eps);
    const auto u0 = s.initial_datum();
    RunOptions o;
    o.T = 2.0;
    o.record_history = o.record_events = false;
    const auto base = run(*s.system, s.boundary, s.solver, s.weights, u0, o).final.to_function();
    double l = 0;
    std::vector<double> d;
    for (double delta : {0.05, 0.025}) {
      Boundary b = s.boundary;
      b.gdata = bump(b.gdata, delta);
      const double gl1 = l1_distance(b.gdata, s.boundary.gdata, 0.0);
      const auto other = run(*s.system, b, s.solver, s.weights, u0, o).final.to_function();
      d.push_back(l1_distance(base, other, 0.0));
      l = std::max(l, d.back() / gl1);
    }
    L.push_back(l);
    dists.push_back(d);
  }
  const double Lfit = 1.25 * L[0];
  const bool bound = dists[1][0] <= Lfit * 0.05 && dists[1][1] <= Lfit * 0.025;
  const double drift = std::abs(L[1] / L[0] - 1.0);
  return {bound && drift <= 0.25,
          fmt("L(0.02)=%.3f L(0.01)=%.3f Lfit=%.3f drift=%.1f%% dist(0.01)=[%.2e, %.2e]", L[0], L[1], Lfit,
              100 * drift, dists[1][0], dists[1][1])};
}

Verdict c5_boundary_sampling() {
  IsothermalPSystem p;
  const double lam2min = p.speed_bounds(2).first;
  SampleOptions o;
  o.count = 1000;
  o.state_amp = 0.02;
  o.strength_amp = 0.02;
  o.data_amp = 0.01;
  std::vector<double> C;
  bool ok = true;
  std::string d;
  for (double c : {0.2, 0.1, 0.05}) {
    Boundary b;
    b.gamma = PiecewiseLinearCurve(0.0, 0.0);
    b.ell = 1;
    b.margin_c = c;
    b.bmap = AffineBoundaryMap::relative_flux(lam2min - c, p.base());
    b.gdata = PiecewiseConstant::constant(State::Zero(1));
    b.validate(p);
    const auto v = fit_and_validate(sample_boundary_interactions(p, b, o), 1.2);
    ok = ok && v.ok;
    C.push_back(v.C);
    d += fmt("c=%g C=%.3f viol=%zu; ", c, v.C, v.violations);
  }
  return {ok && C[1] > C[0] && C[2] > C[1], d};
}

// d(h) / h over the offsets for the curves x = x0 and x = x0 + h.
std::vector<double> trace_slopes(std::uint64_t seed, double x0, const std::vector<double>& hs, double c, double& tv) {
  const auto s = psystem(0.01);
  const auto u0 = random_jump_data(*s.system, 20, 0.3, seed, 0.1, 0.15);
  const auto tr = run(*s.system, s.boundary, s.solver, s.weights, u0, s.run);
  tv = total_variation(u0) + total_variation(s.boundary.gdata, 0.0);
  std::vector<double> out;
  for (double h : hs) out.push_back(trace_distance(tr, vertical(x0, 1, c), vertical(x0 + h, 1, c), s.run.T) / h);
  return out;
}

Verdict c6_trace_distance() {
  const double c = 0.5;
  const std::vector<double> hs{0.2, 0.1, 0.05};
  // K does not depend on the data: fit it on a calibration datum, check it on the target one
  double tv_cal = 0, tv = 0;
  double K = 0;
  for (double q : trace_slopes(7, 0.5, hs, c, tv_cal)) K = std::max(K, 1.25 * q * c / tv_cal);
  const auto q = trace_slopes(42, 1.0, hs, c, tv);
  bool bound = true;
  for (double x : q) bound = bound && x <= K / c * tv;
  const double spread = *std::max_element(q.begin(), q.end()) / *std::min_element(q.begin(), q.end()) - 1.0;
  return {bound && spread <= 0.3,
          fmt("d/h = %.4f %.4f %.4f (spread %.1f%%), K=%.3f, bound slope %.4f", q[0], q[1], q[2], 100 * spread, K,
              K / c * tv)};
}

Verdict c7_restriction() {
  std::vector<double> disc;
  bool ok = true;
  for (double eps : {0.02, 0.01}) {
    const auto s = psystem(eps);
    const auto r = restriction_experiment(*s.system, s.boundary, s.solver, s.initial_datum(), vertical(0.5, 1, 0.2),
                                          2.0, {0.5, 1.0, 1.5, 2.0});
    disc.push_back(r.discrepancy);
    ok = ok && r.discrepancy <= 5 * eps;
  }
  // the restricted solve reproduces the full one exactly, so both may sit at round-off
  const bool floor = std::max(disc[0], disc[1]) <= 1e-9;
  return {ok && (disc[1] < disc[0] || floor), fmt("discrepancy eps=0.02: %.2e, eps=0.01: %.2e", disc[0], disc[1])};
}

Verdict c8_nonuniqueness() {
  const auto r = nonuniqueness_experiment(1.0, 0.01, 0.005, 10);
  const double want = oracle::window_mass_continuous();
  const double rel = std::abs(r.mass_on_34 - want) / want;
  return {r.restricted_norm == 0.0 && rel <= 0.1 && r.trace_sup == 0.0,
          fmt("restricted=%g mass=%.5f oracle=%.5f (%.2f%%) trace sup=%g", r.restricted_norm, r.mass_on_34, want,
              100 * rel, r.trace_sup)};
}

Verdict c9_projection() {
  SampledProfile prof;
  prof.a = -0.3;
  prof.b = 1.7;
  prof.outside = s1(0);
  prof.f = [](double x) { return s1(std::sin(M_PI * (x + 0.3) / 2.0) * (1.0 + 0.5 * std::cos(7 * x))); };
  const auto u = approximate_profile(prof, 1e-4);
  const auto w = PiecewiseConstant::from({0.13, 0.77, 1.21}, {s1(0), s1(2), s1(-1), s1(0)});
  bool ok = true;
  std::string d;
  // linearity
  const auto lhs = project_PiN(2.0 * u + (-3.0) * w, 10);
  const auto rhs = 2.0 * project_PiN(u, 10) + (-3.0) * project_PiN(w, 10);
  const double lin = l1_distance(lhs, rhs);
  ok = ok && lin < 1e-12;
  d += fmt("linearity %.1e; ", lin);
  // contraction and equality on an aligned indicator
  for (int N : {10, 40, 160}) {
    const auto pu = project_PiN(u, N);
    ok = ok && l1_norm(pu, s1(0)) <= l1_norm(u, s1(0)) + 1e-12;
    ok = ok && total_variation(pu) <= 2 * total_variation(u) + 1e-12;
  }
  const auto ind = PiecewiseConstant::indicator(0.2, 0.7, s1(1), s1(0));
  const double eq = std::abs(l1_norm(project_PiN(ind, 10), s1(0)) - l1_norm(ind, s1(0)));
  ok = ok && eq < 1e-12;
  d += fmt("aligned |norm diff| %.1e; ", eq);
  // error decay
  std::vector<double> err;
  for (int N : {10, 40, 160}) err.push_back(l1_distance(project_PiN(u, N), u));
  ok = ok && err[1] < err[0] && err[2] < err[1];
  d += fmt("errors %.2e %.2e %.2e", err[0], err[1], err[2]);
  return {ok, d};
}

Verdict c10_local_flow() {
  LinearAdvection a(1.0);
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::constant(s1(0));
  b.bmap = AffineBoundaryMap::identity(a.base());
  b.ell = 0;
  b.margin_c = 0.5;
  NonlocalWindowSource G(0, 1, 3, 4, 1.0, a.base());
  SolverParams p;
  p.epsilon = p.rho = 0.01;
  const auto u0 = PiecewiseConstant::indicator(0, 1, s1(1), s1(0));
  std::vector<double> d;
  for (double tau : {0.2, 0.1, 0.05}) d.push_back(verify_local_flow(a, b, G, p, {}, u0, 0.0, 2, tau));
  const double r1 = d[0] / d[1], r2 = d[1] / d[2];
  // the first ratio is exactly 3 in exact arithmetic
  auto in = [](double r) { return r >= 3.0 - 1e-9 && r <= 5.0; };
  return {in(r1) && in(r2), fmt("d = %.4e %.4e %.4e, ratios %.6f %.6f", d[0], d[1], d[2], r1, r2)};
}

struct Growth {
  double C_upsilon = 0, C_l1 = 0;
};

// Smallest C with ||u(t)|| <= M e^{Ct} + C t over the logged steps.
double l1_rate(const std::vector<SplitStepLog>& steps, double M) {
  auto ok = [&](double C) {
    for (const auto& s : steps)
      if (s.l1 > M * std::exp(C * s.time) + C * s.time + 1e-12) return false;
    return true;
  };
  double lo = 0, hi = 1;
  while (!ok(hi)) hi *= 2;
  if (ok(0)) return 0;
  for (int k = 0; k < 60; ++k) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

Verdict c11_splitting() {
  LinearAdvection a(1.0);
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::constant(s1(0));
  b.bmap = AffineBoundaryMap::identity(a.base());
  b.ell = 0;
  b.margin_c = 0.5;
  NonlocalWindowSource G(0, 1, 3, 4, 1.0, a.base());
  SolverParams p;
  p.epsilon = p.rho = 0.005;
  const auto u0 = PiecewiseConstant::from({0.0, 0.4, 1.0}, {s1(0), s1(1), s1(0.5), s1(0)});
  const double M = l1_norm(u0, s1(0));
  RunOptions o;
  o.T = 3.0;
  o.record_history = false;
  auto steps_for = [&](double es) {
    SplittingParams sp;
    sp.eps_split = es;
    sp.T = o.T;
    return euler_polygonal(a, b, G, p, {}, sp, u0, o).steps;
  };
  auto rate_of = [&](const std::vector<SplitStepLog>& st) {
    double cu = 0;
    for (const auto& s : st)
      if (s.time > 0) cu = std::max(cu, (s.Upsilon - st.front().Upsilon) / s.time);
    return std::max(cu, l1_rate(st, M));
  };
  const double Cfit = 1.25 * rate_of(steps_for(0.1));
  bool ok = true;
  std::string d = fmt("Cfit=%.4f; ", Cfit);
  for (double es : {0.05, 0.025}) {
    const auto st = steps_for(es);
    std::size_t viol = 0;
    for (const auto& s : st) {
      if (s.Upsilon > st.front().Upsilon + Cfit * s.time + 1e-12) ++viol;
      if (s.l1 > M * std::exp(Cfit * s.time) + Cfit * s.time + 1e-12) ++viol;
    }
    ok = ok && viol == 0;
    d += fmt("eps_split=%g needs %.4f, violations %zu; ", es, rate_of(st), viol);
  }
  return {ok, d};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> suite = {
      {"advection oracle", c1_advection},
      {"p-system Glimm functional", c2_glimm},
      {"convergence in epsilon", c3_convergence},
      {"Lipschitz dependence on g", c4_g_lipschitz},
      {"boundary estimate sampling", c5_boundary_sampling},
      {"trace distance between curves", c6_trace_distance},
      {"restriction to a shifted curve", c7_restriction},
      {"non-uniqueness example", c8_nonuniqueness},
      {"projection Pi_N", c9_projection},
      {"local flow consistency", c10_local_flow},
      {"splitting stability", c11_splitting},
  };
  int failed = 0;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      v = suite[k].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    if (!v.pass) ++failed;
    std::printf("%s %2zu %-32s %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", k + 1, suite[k].first.c_str(),
                v.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(suite.size()) - failed, suite.size());
  return failed == 0 ? 0 : 1;
}
