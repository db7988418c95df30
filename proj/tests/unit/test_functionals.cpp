#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../oracles/psystem_closed_form.hpp"
#include "wft/functionals.hpp"
#include "wft/systems.hpp"

using namespace wft;

namespace {

State s1(double a) { return State::Constant(1, a); }
State s2(double a, double b) {
  State u(2);
  u << a, b;
  return u;
}

Boundary scalar_boundary(const HyperbolicSystem& sys) {
  Boundary b;
  b.gamma = PiecewiseLinearCurve(-1.0, -0.5);
  b.gdata = PiecewiseConstant::constant(s1(0.0));
  b.bmap = AffineBoundaryMap::identity(sys.base());
  b.ell = 0;
  b.margin_c = 0.1;
  return b;
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

Configuration config_of(const HyperbolicSystem& sys, const Boundary& b, const PiecewiseConstant& u0, double eps) {
  SolverParams sp;
  sp.epsilon = sp.rho = eps;
  FrontTracker ft(sys, b, sp);
  ft.init(u0);
  return ft.configuration();
}

PiecewiseConstant sample_data(std::mt19937_64& rng, int jumps, double amp) {
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> br;
  std::vector<State> v{s2(1.0, 0.0)};
  double x = 0.1;
  for (int k = 0; k < jumps; ++k) {
    x += 0.05 + 0.3 * (U(rng) + 1);
    br.push_back(x);
    v.push_back(k + 1 == jumps ? s2(1.0, 0.0) : s2(1.0 + amp * U(rng), amp * U(rng)));
  }
  return PiecewiseConstant::from(br, v);
}

}  // namespace

TEST_CASE("empty configuration gives zero functionals") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  auto c = config_of(p, b, PiecewiseConstant::constant(p.base()), 0.01);
  auto r = compute_upsilon(p, b, c, {});
  CHECK(r.V == 0);
  CHECK(r.Q == 0);
  CHECK(r.Vg == 0);
  CHECK(r.Upsilon == 0);
}

TEST_CASE("two approaching Burgers shocks") {
  Burgers bu(-0.2, 2.5);
  auto b = scalar_boundary(bu);
  b.gdata = PiecewiseConstant::constant(s1(0.6));
  auto c = config_of(bu, b, PiecewiseConstant::from({1.0, 2.0}, {s1(0.6), s1(0.2), s1(0.0)}), 0.01);
  auto r = compute_upsilon(bu, b, c, {});
  CHECK(r.Q == doctest::Approx(0.08));
  CHECK(r.V == doctest::Approx(0.6));
  CHECK(r.approaching_pairs == 1);
}

TEST_CASE("a 1-wave left of a 2-wave does not approach") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  Configuration c;
  c.boundary_position = 0;
  c.trace = c.left_of_boundary = p.base();
  const State m = lax_curve(p, p.base(), 1, -0.05);
  const State r = lax_curve(p, m, 2, -0.05);
  WaveFront f1, f2;
  f1.position = 1;
  f1.family = 1;
  f1.strength = -0.05;
  f1.left_state = p.base();
  f1.right_state = m;
  f2 = f1;
  f2.position = 2;
  f2.family = 2;
  f2.left_state = m;
  f2.right_state = r;
  c.fronts = {f1, f2};
  CHECK(compute_upsilon(p, b, c, {}).Q == 0.0);
  std::swap(c.fronts[0].family, c.fronts[1].family);
  CHECK(compute_upsilon(p, b, c, {}).Q == doctest::Approx(0.0025));
}

TEST_CASE("Exact and Approximate variants agree on exactly resolved data") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  std::mt19937_64 rng(11);
  FunctionalWeights w;
  w.K = 2;
  w.H2 = 3;
  auto c = config_of(p, b, sample_data(rng, 6, 0.01), 1.0);  // rho large: no wavelet splitting
  auto a = compute_upsilon(p, b, c, w, UpsilonVariant::Approximate);
  auto e = compute_upsilon(p, b, c, w, UpsilonVariant::Exact);
  CHECK(a.V == doctest::Approx(e.V).epsilon(1e-8));
  CHECK(a.Q == doctest::Approx(e.Q).epsilon(1e-6));
}

TEST_CASE("Upsilon matches the tracker's incremental value") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  std::mt19937_64 rng(2);
  SolverParams sp;
  sp.epsilon = sp.rho = 0.02;
  FunctionalWeights w;
  w.K = 3;
  w.H1 = 2;
  w.H2 = 4;
  FrontTracker ft(p, b, sp, w);
  ft.init(sample_data(rng, 10, 0.01));
  ft.advance_to(1.0);
  auto r = compute_upsilon(p, b, ft.configuration(), w);
  CHECK(r.Upsilon == doctest::Approx(ft.Upsilon()).epsilon(1e-9));
}

TEST_CASE("q-coordinates") {
  Burgers bu(-0.2, 2.5);
  auto bb = scalar_boundary(bu);
  auto u = config_of(bu, bb, PiecewiseConstant::indicator(0, 1, s1(0.0), s1(0.0)), 0.1);
  auto w = config_of(bu, bb, PiecewiseConstant::indicator(0, 1, s1(0.3), s1(0.0)), 0.1);
  auto qc = compute_q_coordinates(bu, u, w);
  for (std::size_t k = 0; k < qc.q.size(); ++k) {
    const double x = 0.5 * (qc.a[k] + std::min(qc.b[k], qc.a[k] + 1));
    CHECK(qc.q[k](0) == doctest::Approx(w.to_function().at(x)(0) - u.to_function().at(x)(0)));
  }
  auto same = compute_q_coordinates(bu, w, w);
  for (const auto& q : same.q) CHECK(q.norm() == 0.0);

  IsothermalPSystem p;
  const State a = s2(1.0, 0.0), c = s2(1.04, 0.03);
  const Strengths q = shock_strengths(p, a, c);
  const auto o = oracle::shock_coords({1.0, 0.0}, {1.04, 0.03});
  CHECK(std::abs(q(0) - o[0]) < 1e-8);
  CHECK(std::abs(q(1) - o[1]) < 1e-8);
  CHECK((glue_shock(p, a, q) - c).norm() < 1e-10);
}

TEST_CASE("Phi: zero for equal data, constant offset, equivalence band") {
  IsothermalPSystem p;
  auto b = psystem_boundary(p);
  std::mt19937_64 rng(5);
  auto u = config_of(p, b, sample_data(rng, 5, 0.01), 0.02);
  CHECK(compute_phi(p, b, {&u, &u, nullptr, 0.1, 0.1}, {}) == 0.0);

  // no waves in either: a single offset interval of length L with A_i = 0
  Burgers bu(-0.2, 2.5);
  auto bb = scalar_boundary(bu);
  Configuration cu, cw;
  cu.boundary_position = cw.boundary_position = -1.0;
  cu.trace = cu.left_of_boundary = cw.left_of_boundary = s1(0.0);
  cw.trace = s1(0.0);
  WaveFront f;
  f.position = -1.0;
  f.family = 1;
  f.strength = 0.0;
  f.left_state = s1(0.0);
  f.right_state = s1(0.0);
  FunctionalWeights wt;
  wt.kappa2 = 0.5;
  // w: offset 0.2 on [-1, 2) carried by non-physical fronts (no physical jumps, A = 0)
  WaveFront a = f, c = f;
  a.family = c.family = 2;
  a.right_state = c.left_state = s1(0.2);
  c.position = 2.0;
  cw.fronts = {a, c};
  const double phi = compute_phi(bu, bb, {&cu, &cw, nullptr, 0.3, 0.1}, wt);
  CHECK(phi == doctest::Approx(0.2 * 3.0 * (1 + 0.5 * 0.4)));

  // equivalence band, fitted on half the samples and checked on the other half
  std::vector<double> ratios;
  for (int k = 0; k < 40; ++k) {
    auto cu2 = config_of(p, b, sample_data(rng, 5, 0.01), 0.02);
    auto cv2 = config_of(p, b, sample_data(rng, 5, 0.01), 0.02);
    const double l1 = l1_distance(cu2.to_function(), cv2.to_function());
    const double ph = compute_phi(p, b, {&cu2, &cv2, nullptr, 0.05, 0.05}, {});
    ratios.push_back(ph / l1);
  }
  double C3 = 1.0;
  for (int k = 0; k < 20; ++k) C3 = std::max({C3, ratios[k], 1.0 / ratios[k]});
  C3 *= 1.25;
  for (int k = 20; k < 40; ++k) {
    CHECK(ratios[k] <= C3);
    CHECK(ratios[k] >= 1.0 / C3);
  }
  CHECK(C3 < 10.0);
}
