#include "wft/estimates.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <random>

#include "wft/errors.hpp"

namespace wft {

namespace {

struct Draw {
  State u;
  Strengths s;
  Eigen::VectorXd g1, g2;
};

/// Random inputs, generated serially so results do not depend on the thread count.
std::vector<Draw> draws(const HyperbolicSystem& sys, int m, const SampleOptions& opt) {
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<Draw> out(opt.count);
  for (auto& d : out) {
    d.u = sys.base() + opt.state_amp * State::NullaryExpr(sys.n(), [&] { return U(rng); });
    d.s = opt.strength_amp * Strengths::NullaryExpr(sys.n(), [&] { return U(rng); });
    d.g1 = opt.data_amp * Eigen::VectorXd::NullaryExpr(m, [&] { return U(rng); });
    d.g2 = opt.data_amp * Eigen::VectorXd::NullaryExpr(m, [&] { return U(rng); });
  }
  return out;
}

std::vector<EstimateSample> evaluate(std::size_t count, bool parallel,
                                     const std::function<EstimateSample(std::size_t)>& f) {
  std::vector<EstimateSample> out(count);
  std::exception_ptr err;
  const auto N = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (long k = 0; k < N; ++k) {
    try {
      out[static_cast<std::size_t>(k)] = f(static_cast<std::size_t>(k));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

State incident(const HyperbolicSystem& sys, const State& u, const Strengths& s, int ell) {
  State w = u;
  for (int i = 1; i <= ell; ++i) w = lax_curve(sys, w, i, s(i - 1));
  return w;
}

}  // namespace

std::vector<EstimateSample> sample_boundary_interactions(const HyperbolicSystem& sys, const Boundary& bdry,
                                                         const SampleOptions& opt) {
  const int ell = bdry.ell;
  const auto in = draws(sys, bdry.bmap->out_dim(), opt);
  return evaluate(in.size(), opt.parallel, [&](std::size_t k) {
    const Draw& d = in[k];
    const Eigen::VectorXd gm = bdry.bmap->eval(d.u) + d.g1;
    const Eigen::VectorXd gp = gm + d.g2;
    const auto before = solve_boundary_riemann(sys, bdry, d.u, gm);
    const State ur = incident(sys, d.u, d.s, ell);
    const auto after = solve_boundary_riemann(sys, bdry, ur, gp);
    EstimateSample e;
    e.lhs = (after.strengths - before.strengths).lpNorm<1>();
    e.rhs = d.s.head(ell).lpNorm<1>() + d.g2.norm();
    return e;
  });
}

std::vector<EstimateSample> sample_boundary_reflections(const HyperbolicSystem& sys, const Boundary& bdry,
                                                        const SampleOptions& opt) {
  const int ell = bdry.ell;
  if (ell == 0) return {};
  const auto in = draws(sys, bdry.bmap->out_dim(), opt);
  return evaluate(in.size(), opt.parallel, [&](std::size_t k) {
    const Draw& d = in[k];
    const Eigen::VectorXd g = bdry.bmap->eval(d.u);
    const State ur = incident(sys, d.u, d.s, ell);
    EstimateSample e;
    e.lhs = solve_boundary_riemann(sys, bdry, ur, g).strengths.lpNorm<1>();
    e.rhs = d.s.head(ell).lpNorm<1>();
    return e;
  });
}

std::vector<EstimateSample> sample_data_jumps(const HyperbolicSystem& sys, const Boundary& bdry,
                                              const SampleOptions& opt) {
  const auto in = draws(sys, bdry.bmap->out_dim(), opt);
  return evaluate(in.size(), opt.parallel, [&](std::size_t k) {
    const Draw& d = in[k];
    const Eigen::VectorXd g = bdry.bmap->eval(d.u) + d.g2;
    EstimateSample e;
    e.lhs = solve_boundary_riemann(sys, bdry, d.u, g).strengths.lpNorm<1>();
    e.rhs = d.g2.norm();
    return e;
  });
}

std::vector<EstimateSample> sample_interior_interactions(const HyperbolicSystem& sys, const SampleOptions& opt) {
  const int n = sys.n();
  const auto in = draws(sys, 1, opt);
  return evaluate(in.size(), opt.parallel, [&](std::size_t k) {
    const Draw& d = in[k];
    // families from the sample index so every approaching combination is covered
    const int i = 1 + static_cast<int>(k % static_cast<std::size_t>(n));
    const int j = 1 + static_cast<int>((k / static_cast<std::size_t>(n)) % static_cast<std::size_t>(i));
    double s1 = d.s(0), s2 = n > 1 ? d.s(1) : d.g2(0);
    if (i == j && s1 >= 0 && s2 >= 0) s2 = -s2;  // same family: at least one shock
    if (i == j && !sys.gnl(i)) s2 = 0.0;         // contacts of one family never meet
    const State um = lax_curve(sys, d.u, i, s1);
    const State ur = lax_curve(sys, um, j, s2);
    Strengths expect = Strengths::Zero(n);
    expect(i - 1) += s1;
    expect(j - 1) += s2;
    EstimateSample e;
    e.lhs = (riemann_strengths(sys, d.u, ur) - expect).lpNorm<1>();
    e.rhs = std::abs(s1 * s2);
    return e;
  });
}

double fit_constant(const std::vector<EstimateSample>& s, std::size_t begin, std::size_t end) {
  end = std::min(end, s.size());
  double C = 0.0;
  for (std::size_t k = begin; k < end; ++k) C = std::max(C, s[k].ratio());
  return C;
}

Validation fit_and_validate(const std::vector<EstimateSample>& s, double margin) {
  Validation v;
  const std::size_t half = s.size() / 2;
  v.C = fit_constant(s, 0, half);
  for (std::size_t k = half; k < s.size(); ++k) {
    if (v.C > 0) v.worst_ratio = std::max(v.worst_ratio, s[k].ratio() / v.C);
    if (s[k].lhs > margin * v.C * s[k].rhs + 1e-15) ++v.violations;
  }
  v.ok = v.violations == 0 && half > 0;
  return v;
}

FittedConstants fit_weights(const HyperbolicSystem& sys, const Boundary& bdry, const SampleOptions& opt) {
  constexpr double safety = 1.25;
  FittedConstants f;
  f.C_int = safety * fit_constant(sample_interior_interactions(sys, opt));
  f.C_b = safety * fit_constant(sample_boundary_reflections(sys, bdry, opt));
  f.C_g = safety * fit_constant(sample_data_jumps(sys, bdry, opt));
  FunctionalWeights& w = f.weights;
  w.K = 4 * f.C_b + 1;
  w.H1 = 3 * f.C_g + 1;
  w.H2 = 4 * f.C_int * w.K + 1;
  w.recipe_delta0 = 1.0 / (2 * w.H2);
  w.Kbar = f.C_b / bdry.margin_c + 1;
  // a front crossing a curve moves |du| <= max|r_i| |sigma| into the trace variation
  double rmax = 1.0;
  for (const auto& u : sys.omega().grid(11)) {
    const auto es = sys.eigen(u);
    for (int i = 0; i < sys.n(); ++i) rmax = std::max(rmax, es.right.col(i).norm());
  }
  w.Kcheck = safety * rmax;
  w.Khat = 1.0;
  return f;
}

}  // namespace wft
