#include "wft/riemann.hpp"

#include <cmath>
#include <functional>

#include "wft/errors.hpp"

namespace wft {

namespace {

/// Damped Newton with forward-difference Jacobian on F: R^m -> R^m.
Eigen::VectorXd newton(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& F, Eigen::VectorXd x,
                       const NewtonOptions& opt, const char* what) {
  const auto m = x.size();
  Eigen::VectorXd r = F(x);
  for (int it = 0; it < opt.max_iter; ++it) {
    if (r.norm() <= opt.tol) return x;
    Matrix J(r.size(), m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(k)));
      Eigen::VectorXd xp = x;
      xp(k) += h;
      J.col(k) = (F(xp) - r) / h;
    }
    const Eigen::VectorXd dx = J.fullPivLu().solve(-r);
    if (!dx.allFinite()) break;
    double t = 1.0;
    Eigen::VectorXd xt, rt;
    for (int ls = 0; ls < 10; ++ls, t *= 0.5) {
      xt = x + t * dx;
      rt = F(xt);
      if (rt.allFinite() && rt.norm() < r.norm()) break;
    }
    if (!rt.allFinite()) break;
    x = xt;
    r = rt;
    if (x.lpNorm<Eigen::Infinity>() > opt.trust_radius)
      fail(ErrorKind::NoConvergence, std::string(what) + ": iterate left the trust radius");
  }
  if (r.allFinite() && r.norm() <= 1e-10) return x;
  fail(ErrorKind::NoConvergence, std::string(what) + ": Newton did not converge (residual " +
                                     std::to_string(r.norm()) + ")");
}

ElementaryWave make_wave(const HyperbolicSystem& sys, int family, double s, const State& left, const CurvePoint& p) {
  ElementaryWave w;
  w.family = family;
  w.strength = s;
  w.left = left;
  w.right = p.state;
  if (!sys.gnl(family)) {
    w.kind = WaveKind::Contact;
    w.speed_lo = w.speed_hi = p.speed;
  } else if (s < 0) {
    w.kind = WaveKind::Shock;
    w.speed_lo = w.speed_hi = p.speed;
  } else {
    w.kind = WaveKind::Rarefaction;
    w.speed_lo = sys.lambda(left, family);
    w.speed_hi = p.speed;
  }
  return w;
}

}  // namespace

Strengths riemann_strengths(const HyperbolicSystem& sys, const State& um, const State& up, const NewtonOptions& opt) {
  const int n = sys.n();
  if ((up - um).norm() == 0.0) return Strengths::Zero(n);
  const Eigensystem e = sys.eigen(0.5 * (um + up));
  Eigen::VectorXd x0 = e.left * (up - um);
  auto F = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd { return glue_lax(sys, um, s, Check::No) - up; };
  return newton(F, x0, opt, "Riemann solve");
}

Strengths shock_strengths(const HyperbolicSystem& sys, const State& u, const State& w, const NewtonOptions& opt) {
  const int n = sys.n();
  if ((w - u).norm() == 0.0) return Strengths::Zero(n);
  const Eigensystem e = sys.eigen(0.5 * (u + w));
  Eigen::VectorXd x0 = e.left * (w - u);
  auto F = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd { return glue_shock(sys, u, q, Check::No) - w; };
  return newton(F, x0, opt, "q-coordinates");
}

std::vector<ElementaryWave> build_fan(const HyperbolicSystem& sys, const State& left, const Strengths& sigma,
                                      int first_family, const State& right) {
  std::vector<ElementaryWave> fan;
  State w = left;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    const int family = first_family + static_cast<int>(k);
    const double s = sigma(k);
    if (s == 0.0) continue;
    const CurvePoint p = lax_step(sys, w, family, s);
    fan.push_back(make_wave(sys, family, s, w, p));
    w = p.state;
  }
  if (!fan.empty()) fan.back().right = right;
  return fan;
}

RiemannSolution solve_riemann(const HyperbolicSystem& sys, const State& um, const State& up, const NewtonOptions& opt) {
  RiemannSolution sol;
  sol.system = &sys;
  sol.left = um;
  sol.right = up;
  sol.strengths = riemann_strengths(sys, um, up, opt);
  sol.fan = build_fan(sys, um, sol.strengths, 1, up);
  return sol;
}

State boundary_trace_of(const HyperbolicSystem& sys, int ell, const State& u_o, const Strengths& s, CurveKind kind,
                        Check check) {
  State v = u_o;
  for (int i = sys.n(); i >= ell + 1; --i) {
    const double si = s(i - ell - 1);
    v = kind == CurveKind::Lax ? inverse_lax_curve(sys, v, i, -si, check) : shock_curve(sys, v, i, -si, check).state;
  }
  return v;
}

BoundaryRiemannSolution solve_boundary_riemann(const HyperbolicSystem& sys, const Boundary& bdry, const State& u_o,
                                               const Eigen::VectorXd& g_o, CurveKind kind, const NewtonOptions& opt) {
  const int n = sys.n(), ell = bdry.ell, m = n - ell;
  BoundaryRiemannSolution out;
  const Eigen::VectorXd b0 = bdry.bmap->eval(u_o);
  if ((b0 - g_o).norm() <= 1e-13) {
    out.trace_state = u_o;
    out.strengths = Strengths::Zero(m);
    return out;
  }
  const Eigensystem e = sys.eigen(u_o);
  const Matrix Db = bdry.bmap->jacobian(u_o);
  Matrix M(Db.rows(), m);
  for (int j = 0; j < m; ++j) M.col(j) = Db * e.right.col(ell + j);
  Eigen::VectorXd x0 = M.fullPivLu().solve(b0 - g_o);
  auto F = [&](const Eigen::VectorXd& s) -> Eigen::VectorXd {
    return bdry.bmap->eval(boundary_trace_of(sys, ell, u_o, s, kind)) - g_o;
  };
  out.strengths = newton(F, x0, opt, "boundary Riemann solve");
  out.trace_state = boundary_trace_of(sys, ell, u_o, out.strengths, kind, Check::Yes);
  if (kind == CurveKind::Lax) {
    out.fan = build_fan(sys, out.trace_state, out.strengths, ell + 1, u_o);
  } else {
    State w = out.trace_state;
    for (int k = 0; k < m; ++k) {
      const double s = out.strengths(k);
      if (s == 0.0) continue;
      const CurvePoint p = shock_curve(sys, w, ell + 1 + k, s);
      ElementaryWave wave = make_wave(sys, ell + 1 + k, s, w, p);
      wave.kind = sys.gnl(ell + 1 + k) ? WaveKind::Shock : WaveKind::Contact;
      wave.speed_lo = wave.speed_hi = p.speed;
      out.fan.push_back(wave);
      w = p.state;
    }
    if (!out.fan.empty()) out.fan.back().right = u_o;
  }
  return out;
}

State evaluate_fan(const HyperbolicSystem& sys, const std::vector<ElementaryWave>& fan, const State& left, double xi) {
  if (fan.empty()) return left;
  for (const auto& w : fan) {
    if (xi < w.speed_lo) return w.left;
    if (w.kind == WaveKind::Rarefaction && xi < w.speed_hi)
      return rarefaction_curve(sys, w.left, w.family, xi - w.speed_lo, Check::No);
  }
  return fan.back().right;
}

State evaluate_fan(const RiemannSolution& sol, double xi) {
  if (sol.fan.empty()) return xi < 0 ? sol.left : sol.right;
  return evaluate_fan(*sol.system, sol.fan, sol.left, xi);
}

}  // namespace wft
