#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wft/errors.hpp"
#include "wft/front_tracking.hpp"
#include "wft/systems.hpp"

using namespace wft;

namespace {

State s1(double a) { return State::Constant(1, a); }
State s2(double a, double b) {
  State u(2);
  u << a, b;
  return u;
}

Boundary scalar_boundary(const HyperbolicSystem& sys, PiecewiseLinearCurve gamma, double c) {
  Boundary b;
  b.gamma = std::move(gamma);
  b.gdata = PiecewiseConstant::constant(s1(0.0));
  b.bmap = AffineBoundaryMap::identity(sys.base());
  b.ell = 0;
  b.margin_c = c;
  return b;
}

Boundary psystem_boundary(const IsothermalPSystem& p) {
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::from({0.5, 1.0, 1.5}, {s1(0.0), s1(0.03), s1(-0.02), s1(0.01)});
  b.bmap = AffineBoundaryMap::components({1}, p.base());
  b.ell = 1;
  b.margin_c = 0.2;
  return b;
}

PiecewiseConstant random_psystem_data(int jumps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> br;
  std::vector<State> v{s2(1.0, 0.0)};
  for (int k = 0; k < jumps; ++k) {
    br.push_back(0.2 + 2.5 * (k + 0.5 * (U(rng) + 1)) / jumps);
    v.push_back(k + 1 == jumps ? s2(1.0, 0.0) : s2(1.0 + 0.01 * U(rng), 0.01 * U(rng)));
  }
  return PiecewiseConstant::from(br, v);
}

SolverParams params(double eps) {
  SolverParams p;
  p.epsilon = eps;
  p.rho = eps;
  return p;
}

}  // namespace

TEST_CASE("advection transports the data exactly") {
  LinearAdvection a(1.0);
  auto b = scalar_boundary(a, PiecewiseLinearCurve(0.0, 0.0), 0.5);
  auto u0 = PiecewiseConstant::indicator(0, 1, s1(1), s1(0));
  RunOptions opt;
  opt.T = 3.0;
  opt.snapshot_times = {0.5, 3.0};
  auto tr = run(a, b, params(0.1), {}, u0, opt);
  const auto* c = tr.snapshot_at(0.5);
  REQUIRE(c);
  REQUIRE(c->fronts.size() == 2);
  CHECK(c->fronts[0].x(0.5) == doctest::Approx(0.5));
  CHECK(c->fronts[1].x(0.5) == doctest::Approx(1.5));
  auto shifted = PiecewiseConstant::indicator(3, 4, s1(1), s1(0));
  CHECK(l1_distance(tr.final.to_function(), shifted) < 1e-12);
  CHECK(tr.events.size() == 1);  // only the initial record
}

TEST_CASE("Burgers shocks merge at the predicted point") {
  Burgers bu(-0.2, 2.5);
  auto b = scalar_boundary(bu, PiecewiseLinearCurve(-1.0, -0.5), 0.1);
  b.gdata = PiecewiseConstant::constant(s1(2.0));
  auto u0 = PiecewiseConstant::from({1.0, 2.0}, {s1(2), s1(1), s1(0)});
  RunOptions opt;
  opt.T = 2.0;
  auto tr = run(bu, b, params(0.01), {}, u0, opt);
  REQUIRE(tr.events.size() == 2);
  const auto& e = tr.events[1];
  CHECK(e.kind == EventKind::FrontCollision);
  CHECK(e.time == doctest::Approx(1.0));
  CHECK(e.location == doctest::Approx(2.5));
  REQUIRE(tr.final.fronts.size() == 1);
  CHECK(tr.final.fronts[0].speed == doctest::Approx(1.0));
  CHECK(tr.final.fronts[0].x(2.0) == doctest::Approx(3.5));
}

TEST_CASE("rarefactions are split into fronts of size at most rho") {
  Burgers bu(-0.2, 2.5);
  auto b = scalar_boundary(bu, PiecewiseLinearCurve(-1.0, -0.5), 0.1);
  auto u0 = PiecewiseConstant::indicator(0, 5, s1(1), s1(0));
  FrontTracker ft(bu, b, params(0.1));
  ft.init(u0);
  CHECK(ft.front_count() == 11);  // ten rarefaction fronts and one shock
  for (const auto& f : ft.configuration().fronts) CHECK(f.strength <= 0.1 + 1e-12);
}

TEST_CASE("p-system run: chaining, incremental functionals, determinism") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  FunctionalWeights w;
  w.K = 3;
  w.H1 = 2;
  w.H2 = 5;
  auto u0 = random_psystem_data(12, 7);
  RunOptions opt;
  opt.T = 2.0;
  opt.snapshot_times = {0.5, 1.0, 2.0};
  auto tr = run(p, b, params(0.02), w, u0, opt);
  CHECK(tr.events.size() > 20);
  for (const auto& s : tr.snapshots) CHECK_NOTHROW(s.cfg.check());

  FrontTracker ft(p, b, params(0.02), w);
  ft.init(u0);
  int checked = 0;
  while (ft.next_event_time() <= 2.0) {
    ft.step();
    if (ft.event_count() % 7 == 0) {
      auto [V, Q] = ft.recompute_VQ();
      CHECK(std::abs(V - ft.V()) < 1e-9);
      CHECK(std::abs(Q - ft.Q()) < 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 0);

  auto again = run(p, b, params(0.02), w, u0, opt);
  REQUIRE(again.events.size() == tr.events.size());
  for (std::size_t k = 0; k < tr.events.size(); ++k) {
    CHECK(again.events[k].time == tr.events[k].time);
    CHECK(again.events[k].location == tr.events[k].location);
  }
  CHECK(l1_distance(again.final.to_function(), tr.final.to_function()) == 0.0);
}

TEST_CASE("boundary data jumps emit outgoing waves only") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  RunOptions opt;
  opt.T = 1.2;
  auto tr = run(p, b, params(0.02), {}, PiecewiseConstant::constant(p.base()), opt);
  int jumps = 0;
  for (const auto& e : tr.events)
    if (e.kind == EventKind::BoundaryDataJump) {
      ++jumps;
      for (int f : e.outgoing_families) CHECK(f == 2);
    }
  CHECK(jumps == 2);
  CHECK(b.bmap->eval(tr.final.trace)(0) == doctest::Approx(-0.02).epsilon(1e-10));
}

TEST_CASE("event budget is enforced") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  auto sp = params(0.02);
  sp.event_budget = 5;
  RunOptions opt;
  opt.T = 2.0;
  try {
    run(p, b, sp, {}, random_psystem_data(12, 7), opt);
    FAIL("expected budget error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::EventBudgetExceeded);
  }
}

TEST_CASE("data approximation") {
  SampledProfile prof{[](double x) { return s1(std::sin(x)); }, 0.0, 3.0, s1(0.0)};
  auto f = approximate_profile(prof, 0.01);
  double err = 0;
  const int M = 20000;
  for (int k = 0; k < M; ++k) {
    const double x = 3.0 * (k + 0.5) / M;
    err += std::abs(f.at(x)(0) - std::sin(x)) * 3.0 / M;
  }
  CHECK(err < 0.005 + 1e-4);
  auto g = approximate_boundary_data([](double t) { return s1(t); }, 1.0, 0.1);
  CHECK(g.at(5.0)(0) == doctest::Approx(1.0));
  CHECK(total_variation(g) <= 1.0 + 1e-12);
}
