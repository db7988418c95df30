#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles/window_mass.hpp"
#include "wft/errors.hpp"
#include "wft/systems.hpp"
#include "wft/traces.hpp"

using namespace wft;

namespace {

State s1(double a) { return State::Constant(1, a); }
State s2(double a, double b) {
  State u(2);
  u << a, b;
  return u;
}

Boundary inflow_zero(const HyperbolicSystem& sys) {
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::constant(s1(0.0));
  b.bmap = AffineBoundaryMap::identity(sys.base());
  b.ell = 0;
  b.margin_c = 0.5;
  return b;
}

Boundary psystem_boundary(const IsothermalPSystem& p) {
  Boundary b;
  b.gamma = PiecewiseLinearCurve(0.0, 0.0);
  b.gdata = PiecewiseConstant::from({0.3, 0.9}, {s1(0.0), s1(0.02), s1(-0.01)});
  b.bmap = AffineBoundaryMap::components({1}, p.base());
  b.ell = 1;
  b.margin_c = 0.2;
  return b;
}

PiecewiseConstant psystem_data(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> br;
  std::vector<State> v{s2(1.0, 0.0)};
  for (int k = 0; k < 10; ++k) {
    br.push_back(0.1 + 0.25 * k + 0.1 * U(rng));
    v.push_back(k == 9 ? s2(1.0, 0.0) : s2(1.0 + 0.015 * U(rng), 0.015 * U(rng)));
  }
  return PiecewiseConstant::from(br, v);
}

SolverParams params(double eps) {
  SolverParams p;
  p.epsilon = p.rho = eps;
  return p;
}

Trajectory advection_run(double T) {
  static LinearAdvection a(1.0);
  RunOptions opt;
  opt.T = T;
  return run(a, inflow_zero(a), params(0.1), {}, PiecewiseConstant::indicator(0, 1, s1(1), s1(0)), opt);
}

CurveSpec vertical(double x, int ell, double c) { return {PiecewiseLinearCurve(x, 0.0), ell, c}; }

}  // namespace

TEST_CASE("traces of advection") {
  auto tr = advection_run(4.0);
  auto t = sample_trace(tr, vertical(2.0, 0, 0.5));
  CHECK(t.at(0.5)(0) == 0.0);
  CHECK(t.at(1.0)(0) == 1.0);
  CHECK(t.at(1.99)(0) == 1.0);
  CHECK(t.at(2.0)(0) == 0.0);
  CHECK(total_variation(t, 0.0, 4.0) == 2.0);
  CHECK(trace_distance(tr, vertical(2.0, 0, 0.5), vertical(2.1, 0, 0.5), 4.0) == doctest::Approx(0.2));
  CHECK(trace_distance(tr, vertical(2.0, 0, 0.5), vertical(2.0, 0, 0.5), 4.0) == 0.0);
  CHECK_THROWS_AS(sample_trace(tr, vertical(2.0, 0, 2.0)), SolverError);
}

TEST_CASE("trace of the zero solution vanishes") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  b.gdata = PiecewiseConstant::constant(State::Zero(1));
  RunOptions opt;
  opt.T = 1.0;
  auto tr = run(p, b, params(0.02), {}, PiecewiseConstant::constant(p.base()), opt);
  auto t = sample_trace(tr, vertical(0.5, 1, 0.2));
  for (const auto& v : t.values) CHECK((v - p.base()).norm() == 0.0);
  CHECK(trace_continuity_probe(tr, vertical(0.5, 1, 0.2), 1.0, 0.1) == 0.0);
}

TEST_CASE("curve on the boundary recovers the boundary condition") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  RunOptions opt;
  opt.T = 1.5;
  auto tr = run(p, b, params(0.02), {}, psystem_data(3), opt);
  auto t = sample_trace(tr, vertical(0.0, 1, 0.2));
  for (double s : {0.1, 0.5, 1.2}) CHECK(b.bmap->eval(t.at(s))(0) == doctest::Approx(b.g(s)(0)).epsilon(1e-9));
}

TEST_CASE("continuity probe shrinks with the offset") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  RunOptions opt;
  opt.T = 1.5;
  auto tr = run(p, b, params(0.02), {}, psystem_data(4), opt);
  const double a = trace_continuity_probe(tr, vertical(0.6, 1, 0.2), 1.5, 0.1);
  const double c = trace_continuity_probe(tr, vertical(0.6, 1, 0.2), 1.5, 0.025);
  CHECK(a > 0.0);
  CHECK(c < a);
}

TEST_CASE("restriction to the original boundary reproduces the run") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  auto rep = restriction_experiment(p, b, params(0.02), psystem_data(5), {b.gamma, 1, 0.2}, 1.0, {0.5, 1.0});
  CHECK(rep.discrepancy < 1e-9);
}

TEST_CASE("restriction to a shifted curve stays within a few epsilon") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  auto rep = restriction_experiment(p, b, params(0.02), psystem_data(6), vertical(0.5, 1, 0.2), 1.5, {0.5, 1.0, 1.5});
  CHECK(rep.discrepancy <= 5 * 0.02);
}

TEST_CASE("curve functional bookkeeping on advection") {
  auto tr = advection_run(4.0);
  FunctionalWeights w;
  w.Kcheck = 1;
  w.Khat = 0;
  // advection is family 1 and l~ = 0, so every front counts inside [gamma, Gamma] only
  auto xi = compute_xi(tr, vertical(2.0, 0, 0.5), w);
  auto at = [&](double t) {
    XiSample last;
    for (const auto& s : xi)
      if (s.time <= t) last = s;
    return last;
  };
  CHECK(at(0.5).inside == 2.0);
  CHECK(at(1.5).inside == 1.0);  // left edge crossed, right edge still inside
  CHECK(at(1.5).trace_tv == 1.0);
  CHECK(at(3.0).inside == 0.0);
  CHECK(at(3.0).trace_tv == 2.0);
  for (std::size_t k = 1; k < xi.size(); ++k) CHECK(xi[k].Xi <= xi[k - 1].Xi + 1e-12);
}

TEST_CASE("non-uniqueness experiment") {
  auto r = nonuniqueness_experiment(1.0, 0.1, 0.01, 10);
  CHECK(r.restricted_norm == 0.0);
  CHECK(r.trace_sup == 0.0);
  CHECK(r.mass_on_34 == doctest::Approx(oracle::window_mass_split(0.1)).epsilon(1e-10));
  CHECK(std::abs(r.mass_on_34 - oracle::window_mass_continuous()) <= 0.1 * oracle::window_mass_continuous());
  auto z = nonuniqueness_experiment(0.0, 0.1, 0.01, 10);
  CHECK(z.mass_on_34 == 0.0);
  CHECK(z.restricted_norm == 0.0);
}
