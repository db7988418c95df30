#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wft/errors.hpp"
#include "wft/piecewise.hpp"

using namespace wft;

namespace {
State s(double a) { return State::Constant(1, a); }
}  // namespace

TEST_CASE("right continuity and lookup") {
  auto f = PiecewiseConstant::from({0.0, 1.0}, {s(0), s(2), s(0)});
  CHECK(f.at(-1)(0) == 0);
  CHECK(f.at(0)(0) == 2);
  CHECK(f.at(0.999)(0) == 2);
  CHECK(f.at(1)(0) == 0);
  CHECK(f.left_limit(0)(0) == 0);
  CHECK(f.left_limit(1)(0) == 2);
}

TEST_CASE("validation rejects bad breaks") {
  CHECK_THROWS_AS(PiecewiseConstant::from({1.0, 0.0}, {s(0), s(1), s(0)}), SolverError);
  CHECK_THROWS_AS(PiecewiseConstant::from({0.0}, {s(0)}), SolverError);
}

TEST_CASE("norms, distances and total variation") {
  auto f = PiecewiseConstant::indicator(0, 1, s(1), s(0));
  auto g = PiecewiseConstant::indicator(0.5, 2, s(1), s(0));
  CHECK(l1_norm(f, s(0)) == doctest::Approx(1.0));
  CHECK(l1_distance(f, g) == doctest::Approx(0.5 + 1.0));
  CHECK(total_variation(f) == doctest::Approx(2.0));
  CHECK(total_variation(f, 0.0, 5.0) == doctest::Approx(1.0));  // jumps in (lo, hi]
  CHECK(integral(f + g, -1, 3)(0) == doctest::Approx(2.5));
  CHECK(integral(2.0 * f - g, 0, 1)(0) == doctest::Approx(1.5));
}

TEST_CASE("simplify and restriction") {
  auto f = PiecewiseConstant::from({0.0, 1.0, 2.0}, {s(0), s(1), s(1), s(0)});
  f.simplify();
  CHECK(f.jumps() == 2);
  auto r = restrict_right(f, 0.5, s(0));
  CHECK(r.at(0.2)(0) == 0);
  CHECK(r.at(0.7)(0) == 1);
  CHECK(l1_norm(r, s(0)) == doctest::Approx(1.5));
}
