#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles/psystem_closed_form.hpp"
#include "wft/errors.hpp"
#include "wft/riemann.hpp"
#include "wft/systems.hpp"

using namespace wft;

namespace {

State s1(double a) { return State::Constant(1, a); }
State s2(double a, double b) {
  State u(2);
  u << a, b;
  return u;
}

Boundary psystem_boundary(const IsothermalPSystem& p) {
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::constant(State::Zero(1));
  b.bmap = AffineBoundaryMap::components({1}, p.base());
  b.ell = 1;
  b.margin_c = 0.2;
  return b;
}

}  // namespace

TEST_CASE("trivial Riemann problem") {
  IsothermalPSystem p;
  auto sol = solve_riemann(p, p.base(), p.base());
  CHECK(sol.strengths.norm() == 0.0);
  CHECK(sol.fan.empty());
}

TEST_CASE("Burgers shock and rarefaction") {
  Burgers b;
  auto sol = solve_riemann(b, s1(1.0), s1(0.0));
  REQUIRE(sol.fan.size() == 1);
  CHECK(sol.fan[0].kind == WaveKind::Shock);
  CHECK(sol.fan[0].speed_lo == doctest::Approx(0.5));
  auto rar = solve_riemann(b, s1(0.0), s1(1.0));
  CHECK(evaluate_fan(rar, 0.5)(0) == doctest::Approx(0.5));
  CHECK(evaluate_fan(rar, -1.0)(0) == doctest::Approx(0.0));
  CHECK(evaluate_fan(rar, 2.0)(0) == doctest::Approx(1.0));
}

TEST_CASE("p-system Riemann problem against the 2D Newton oracle") {
  IsothermalPSystem p;
  auto sol = solve_riemann(p, s2(1.0, 0.0), s2(1.0, 0.2));
  const auto o = oracle::riemann({1.0, 0.0}, {1.0, 0.2});
  CHECK(std::abs(sol.strengths(0) - o[0]) < 1e-8);
  CHECK(std::abs(sol.strengths(1) - o[1]) < 1e-8);
  // raising the momentum at fixed density: two rarefactions, 0.1 each
  CHECK(sol.strengths(0) == doctest::Approx(0.1));
  CHECK(sol.strengths(1) == doctest::Approx(0.1));
  CHECK((glue_lax(p, sol.left, sol.strengths) - sol.right).norm() < 1e-10);
  for (std::size_t k = 1; k < sol.fan.size(); ++k) {
    CHECK(sol.fan[k - 1].speed_hi <= sol.fan[k].speed_lo);
    CHECK((sol.fan[k - 1].right - sol.fan[k].left).norm() < 1e-14);
  }
  CHECK((evaluate_fan(sol, -5.0) - sol.left).norm() == 0.0);
  CHECK((evaluate_fan(sol, 5.0) - sol.right).norm() == 0.0);
  // inside the 1-rarefaction lambda_1 equals xi
  const auto& w = sol.fan.front();
  const double xi = 0.5 * (w.speed_lo + w.speed_hi);
  CHECK(p.lambda(evaluate_fan(sol, xi), 1) == doctest::Approx(xi).epsilon(1e-12));
}

TEST_CASE("E and Psi are inverse on sampled pairs") {
  IsothermalPSystem p;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 200; ++k) {
    const State ul = s2(1.0 + 0.15 * U(rng), 0.08 * U(rng));
    Strengths s(2);
    s << 0.08 * U(rng), 0.08 * U(rng);
    const State ur = glue_lax(p, ul, s, Check::No);
    const Strengths e = riemann_strengths(p, ul, ur);
    CHECK((e - s).norm() < 1e-9);
    CHECK((glue_lax(p, ul, e, Check::No) - ur).norm() < 1e-10);
  }
}

TEST_CASE("boundary Riemann problem: scalar, l = 0") {
  LinearAdvection a(1.0);
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::constant(s1(0.0));
  b.bmap = AffineBoundaryMap::identity(a.base());
  b.ell = 0;
  b.margin_c = 0.5;
  b.validate(a);
  auto sol = solve_boundary_riemann(a, b, s1(0.0), s1(0.7));
  CHECK(sol.trace_state(0) == doctest::Approx(0.7));
  REQUIRE(sol.fan.size() == 1);
  CHECK(sol.fan[0].left(0) == doctest::Approx(0.7));
  CHECK(sol.fan[0].right(0) == doctest::Approx(0.0));
  auto zero = solve_boundary_riemann(a, b, s1(0.0), s1(0.0));
  CHECK(zero.strengths.norm() == 0.0);
  CHECK(zero.trace_state(0) == 0.0);
}

TEST_CASE("boundary Riemann problem: p-system, b = q, against a 1D oracle") {
  IsothermalPSystem p;
  Boundary b = psystem_boundary(p);
  b.validate(p);
  auto sol = solve_boundary_riemann(p, b, p.base(), State::Constant(1, 0.1));
  CHECK(b.bmap->eval(sol.trace_state)(0) == doctest::Approx(0.1).epsilon(1e-12));
  // oracle: bisection on s with q(psi-bar_2(-s)(u_o)) = 0.1
  auto q_of = [&](double s) {
    oracle::P u{1.0, 0.0};
    oracle::P t = -s >= 0 ? oracle::shock_bisect(u, 2, -s).first : oracle::rarefaction_rk4(u, 2, -s);
    return t[1];
  };
  double lo = -0.5, hi = 0.5;
  const bool inc = q_of(hi) > q_of(lo);
  for (int it = 0; it < 100; ++it) {
    const double m = 0.5 * (lo + hi);
    if ((q_of(m) < 0.1) == inc) lo = m; else hi = m;
  }
  CHECK(std::abs(sol.strengths(0) - 0.5 * (lo + hi)) < 1e-8);
  REQUIRE(sol.fan.size() == 1);
  CHECK(sol.fan[0].family == 2);
  CHECK(sol.fan[0].speed_lo > b.gamma.slope(0) + b.margin_c);
}

TEST_CASE("boundary solver consistency: the trace is a fixed point") {
  IsothermalPSystem p;
  Boundary b = psystem_boundary(p);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const State uo = s2(1.0 + 0.1 * U(rng), 0.05 * U(rng));
    const Eigen::VectorXd g = State::Constant(1, 0.05 * U(rng));
    for (CurveKind kind : {CurveKind::Lax, CurveKind::Shock}) {
      auto sol = solve_boundary_riemann(p, b, uo, g, kind);
      auto again = solve_boundary_riemann(p, b, sol.trace_state, g, kind);
      CHECK(again.strengths.norm() < 1e-12);
      CHECK((b.bmap->eval(sol.trace_state) - g).norm() < 1e-10);
      if (kind == CurveKind::Shock) {
        State w = sol.trace_state;
        w = shock_curve(p, w, 2, sol.strengths(0)).state;
        CHECK((w - uo).norm() < 1e-10);
      }
    }
  }
}

TEST_CASE("degenerate boundary map is rejected") {
  IsothermalPSystem p;
  Boundary b = psystem_boundary(p);
  // b = q - rho + 1 at base: Db r2 = rho (lambda_2 - 1) = 0
  b.bmap = AffineBoundaryMap::relative_flux(1.0, p.base());
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  bool thrown = false;
  try {
    b.validate(p);
  } catch (const SolverError& e) {
    thrown = e.kind() == ErrorKind::DegenerateBoundary;
  }
  CHECK(thrown);
}

TEST_CASE("characteristic boundary is rejected with the band named") {
  IsothermalPSystem p;
  Boundary b = psystem_boundary(p);
  b.gamma = PiecewiseLinearCurve(0.0, 0.7);  // inside the 2-band margin
  try {
    b.validate(p);
    FAIL("expected a validation error");
  } catch (const SolverError& e) {
    CHECK(e.kind() == ErrorKind::ValidationError);
    CHECK(std::string(e.what()).find("family 2") != std::string::npos);
  }
}

TEST_CASE("Newton trust radius fails loudly") {
  IsothermalPSystem p(0.3, 3.0, -0.25, 0.25);
  NewtonOptions opt;
  opt.trust_radius = 0.05;
  bool thrown = false;
  try {
    solve_riemann(p, s2(1.0, 0.0), s2(1.6, 0.0), opt);
  } catch (const SolverError& e) {
    thrown = e.kind() == ErrorKind::NoConvergence;
  }
  CHECK(thrown);
}
