#include "wft/system.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "wft/errors.hpp"

namespace wft {

namespace {

std::string fmt_state(const State& u) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
  os << ")";
  return os.str();
}

void check_omega(const HyperbolicSystem& sys, const State& v, const char* what) {
  if (!v.allFinite() || !sys.omega().contains(v, 1e-12))
    fail(ErrorKind::LeftOmega, std::string(what) + " produced state " + fmt_state(v) + " outside omega");
}

}  // namespace

bool Box::contains(const State& u, double tol) const {
  for (Eigen::Index i = 0; i < u.size(); ++i)
    if (u(i) < lo(i) - tol || u(i) > hi(i) + tol) return false;
  return true;
}

std::vector<State> Box::grid(int per_axis) const {
  const int n = static_cast<int>(lo.size());
  per_axis = std::max(per_axis, 2);
  std::vector<State> out;
  std::vector<int> idx(n, 0);
  while (true) {
    State u(n);
    for (int k = 0; k < n; ++k) u(k) = lo(k) + (hi(k) - lo(k)) * idx[k] / double(per_axis - 1);
    out.push_back(u);
    int k = 0;
    while (k < n && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

HyperbolicSystem::HyperbolicSystem(int n, std::vector<FieldType> fields, Box omega, State base)
    : n_(n), fields_(std::move(fields)), omega_(std::move(omega)), base_(std::move(base)) {
  if (n_ < 1 || static_cast<int>(fields_.size()) != n_ || omega_.lo.size() != n_ ||
      omega_.hi.size() != n_ || base_.size() != n_)
    fail(ErrorKind::ValidationError, "inconsistent system dimensions");
  if (!omega_.contains(base_, 0.0)) fail(ErrorKind::ValidationError, "base state outside omega");
  providers_.assign(n_, CurveProvider::Numeric);
}

Matrix HyperbolicSystem::jacobian(const State& u) const {
  Matrix J(n_, n_);
  for (int k = 0; k < n_; ++k) {
    const double h = 1e-6 * std::max(1.0, std::abs(u(k)));
    State up = u, um = u;
    up(k) += h;
    um(k) -= h;
    J.col(k) = (flux(up) - flux(um)) / (2 * h);
  }
  return J;
}

double HyperbolicSystem::lambda_derivative(const State& u, int family, const State& r) const {
  // d lambda = l A' r / (l r), with A' from central differences, then Richardson.
  const Eigensystem base = [&] {
    Eigen::EigenSolver<Matrix> es(jacobian(u));
    Eigensystem e;
    std::vector<int> order(n_);
    std::iota(order.begin(), order.end(), 0);
    const auto ev = es.eigenvalues().real();
    std::sort(order.begin(), order.end(), [&](int a, int b) { return ev(a) < ev(b); });
    e.values.resize(n_);
    e.right.resize(n_, n_);
    for (int k = 0; k < n_; ++k) {
      e.values(k) = ev(order[k]);
      e.right.col(k) = es.eigenvectors().col(order[k]).real();
    }
    e.left = e.right.inverse();
    return e;
  }();
  const Eigen::RowVectorXd l = base.left.row(family - 1);
  const State ri = base.right.col(family - 1);
  auto D = [&](double h) {
    const Matrix dA = (jacobian(u + h * r) - jacobian(u - h * r)) / (2 * h);
    return (l * dA * ri)(0) / (l * ri)(0);
  };
  const double h = 1e-3 * std::max(1.0, u.norm()) / std::max(1.0, r.norm());
  return (4 * D(h / 2) - D(h)) / 3;
}

Eigensystem HyperbolicSystem::eigen(const State& u) const {
  const Matrix A = jacobian(u);
  Eigen::EigenSolver<Matrix> es(A);
  const auto ev = es.eigenvalues();
  const double scale = std::max(1.0, A.norm());
  for (int k = 0; k < n_; ++k)
    if (std::abs(ev(k).imag()) > 1e-10 * scale)
      fail(ErrorKind::NonHyperbolic, "complex eigenvalue at " + fmt_state(u));
  std::vector<int> order(n_);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return ev(a).real() < ev(b).real(); });
  Eigensystem e;
  e.values.resize(n_);
  e.right.resize(n_, n_);
  for (int k = 0; k < n_; ++k) {
    e.values(k) = ev(order[k]).real();
    State r = es.eigenvectors().col(order[k]).real();
    r.normalize();
    e.right.col(k) = r;
  }
  for (int k = 1; k < n_; ++k)
    if (e.values(k) - e.values(k - 1) <= 1e-10 * scale)
      fail(ErrorKind::NonHyperbolic, "repeated eigenvalue at " + fmt_state(u));
  for (int k = 0; k < n_; ++k) {
    State r = e.right.col(k);
    if (fields_[k] == FieldType::GenuinelyNonlinear) {
      const double d = lambda_derivative(u, k + 1, r);
      if (std::abs(d) < 1e-10)
        fail(ErrorKind::NonHyperbolic, "field " + std::to_string(k + 1) + " not genuinely nonlinear at " +
                                           fmt_state(u));
      r /= d;
    } else {
      for (int j = 0; j < n_; ++j) {
        if (std::abs(r(j)) > 1e-12) {
          if (r(j) < 0) r = -r;
          break;
        }
      }
    }
    e.right.col(k) = r;
  }
  e.left = e.right.inverse();
  return e;
}

State HyperbolicSystem::analytic_rarefaction(const State&, int, double) const {
  fail(ErrorKind::ValidationError, name() + " has no analytic curves");
}

CurvePoint HyperbolicSystem::analytic_shock(const State&, int, double) const {
  fail(ErrorKind::ValidationError, name() + " has no analytic curves");
}

void HyperbolicSystem::set_provider(int family, CurveProvider p) {
  if (p == CurveProvider::Analytic && !has_analytic_curves())
    fail(ErrorKind::ValidationError, name() + " has no analytic curves");
  providers_.at(family - 1) = p;
}

void HyperbolicSystem::set_all_providers(CurveProvider p) {
  for (int i = 1; i <= n_; ++i) set_provider(i, p);
}

void HyperbolicSystem::finalize(int grid_per_axis, double hat_factor) {
  if (has_analytic_curves()) providers_.assign(n_, CurveProvider::Analytic);
  bounds_.assign(n_, {1e300, -1e300});
  for (const State& u : omega_.grid(grid_per_axis)) {
    const Eigensystem e = eigen(u);
    for (int k = 0; k < n_; ++k) {
      bounds_[k].first = std::min(bounds_[k].first, e.values(k));
      bounds_[k].second = std::max(bounds_[k].second, e.values(k));
    }
  }
  for (int k = 1; k < n_; ++k)
    if (bounds_[k].first <= bounds_[k - 1].second)
      fail(ErrorKind::NonHyperbolic, "speed intervals of families " + std::to_string(k) + " and " +
                                         std::to_string(k + 1) + " overlap on omega");
  const double m = std::max(std::abs(bounds_.front().first), std::abs(bounds_.back().second));
  lambda_hat_ = hat_factor * m + 1e-3;
}

Eigensystem eigen_decompose(const HyperbolicSystem& sys, const State& u) { return sys.eigen(u); }

namespace {

using OdeState = std::vector<double>;

State numeric_rarefaction(const HyperbolicSystem& sys, const State& u, int family, double sigma) {
  namespace odeint = boost::numeric::odeint;
  const int n = sys.n();
  OdeState x(u.data(), u.data() + n);
  auto rhs = [&](const OdeState& y, OdeState& dy, double) {
    const State v = Eigen::Map<const State>(y.data(), n);
    const State r = sys.eigen(v).right.col(family - 1);
    dy.assign(r.data(), r.data() + n);
  };
  auto stepper = odeint::make_controlled(1e-12, 1e-12, odeint::runge_kutta_dopri5<OdeState>());
  odeint::integrate_adaptive(stepper, rhs, x, 0.0, sigma, sigma / 16);
  return Eigen::Map<State>(x.data(), n);
}

CurvePoint numeric_shock(const HyperbolicSystem& sys, const State& u, int family, double sigma) {
  const int n = sys.n();
  const double lam_u = sys.lambda(u, family);
  if (std::abs(sigma) < 1e-7) {
    const State v = numeric_rarefaction(sys, u, family, sigma);
    return {v, 0.5 * (lam_u + sys.lambda(v, family))};
  }
  const State fu = sys.flux(u);
  // Scaled unknowns v = u + sigma w keep the system regular as sigma -> 0.
  auto residual = [&](const Eigen::VectorXd& z) {
    const State w = z.head(n);
    const double s = z(n);
    const State v = u + sigma * w;
    Eigen::VectorXd F(n + 1);
    F.head(n) = (sys.flux(v) - fu) / sigma - s * w;
    F(n) = (sys.lambda(v, family) - lam_u) / sigma - 1.0;
    return F;
  };
  Eigen::VectorXd z(n + 1);
  z.head(n) = (numeric_rarefaction(sys, u, family, sigma) - u) / sigma;
  z(n) = lam_u + 0.5 * sigma;
  Eigen::VectorXd F = residual(z);
  for (int it = 0; it < 50; ++it) {
    if (F.norm() <= 1e-12) return {u + sigma * z.head(n), z(n)};
    Matrix J(n + 1, n + 1);
    for (int k = 0; k <= n; ++k) {
      const double h = 1e-7 * std::max(1.0, std::abs(z(k)));
      Eigen::VectorXd zp = z, zm = z;
      zp(k) += h;
      zm(k) -= h;
      J.col(k) = (residual(zp) - residual(zm)) / (2 * h);
    }
    const Eigen::VectorXd dz = J.fullPivLu().solve(-F);
    double t = 1.0;
    for (int ls = 0; ls < 12; ++ls, t *= 0.5) {
      const Eigen::VectorXd zt = z + t * dz;
      const Eigen::VectorXd Ft = residual(zt);
      if (Ft.allFinite() && Ft.norm() < F.norm()) {
        z = zt;
        F = Ft;
        break;
      }
      if (ls == 11) {
        z = zt;
        F = Ft;
      }
    }
  }
  if (F.norm() <= 1e-10) return {u + sigma * z.head(n), z(n)};
  fail(ErrorKind::NoConvergence, "Hugoniot locus Newton failed for family " + std::to_string(family) +
                                     " sigma " + std::to_string(sigma));
}

}  // namespace

State rarefaction_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma, Check check) {
  if (sigma == 0.0) return u;
  State v = sys.provider(family) == CurveProvider::Analytic ? sys.analytic_rarefaction(u, family, sigma)
                                                            : numeric_rarefaction(sys, u, family, sigma);
  if (check == Check::Yes) check_omega(sys, v, "rarefaction curve");
  return v;
}

CurvePoint shock_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma, Check check) {
  if (sigma == 0.0) return {u, sys.lambda(u, family)};
  CurvePoint p;
  if (sys.provider(family) == CurveProvider::Analytic) {
    p = sys.analytic_shock(u, family, sigma);
  } else if (!sys.gnl(family)) {
    p.state = numeric_rarefaction(sys, u, family, sigma);
    p.speed = sys.lambda(u, family);
  } else {
    p = numeric_shock(sys, u, family, sigma);
  }
  if (check == Check::Yes) check_omega(sys, p.state, "shock curve");
  return p;
}

State lax_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma, Check check) {
  return sigma >= 0 ? rarefaction_curve(sys, u, family, sigma, check)
                    : shock_curve(sys, u, family, sigma, check).state;
}

State inverse_lax_curve(const HyperbolicSystem& sys, const State& u, int family, double sigma, Check check) {
  return sigma >= 0 ? shock_curve(sys, u, family, sigma, check).state
                    : rarefaction_curve(sys, u, family, sigma, check);
}

CurvePoint lax_step(const HyperbolicSystem& sys, const State& u, int family, double sigma, Check check) {
  if (!sys.gnl(family)) {
    State v = rarefaction_curve(sys, u, family, sigma, check);
    return {v, sys.lambda(u, family)};
  }
  if (sigma < 0) return shock_curve(sys, u, family, sigma, check);
  State v = rarefaction_curve(sys, u, family, sigma, check);
  const double s = sys.lambda(v, family);
  return {std::move(v), s};
}

State glue_lax(const HyperbolicSystem& sys, const State& u, const Strengths& sigma, Check check) {
  State v = u;
  for (int i = 1; i <= sys.n(); ++i) v = lax_curve(sys, v, i, sigma(i - 1), check);
  return v;
}

State glue_shock(const HyperbolicSystem& sys, const State& u, const Strengths& q, Check check) {
  State v = u;
  for (int i = 1; i <= sys.n(); ++i) v = shock_curve(sys, v, i, q(i - 1), check).state;
  return v;
}

double front_speed(const HyperbolicSystem& sys, int family, double sigma, const State& left,
                   const State& right) {
  if (!sys.gnl(family)) return sys.lambda(left, family);
  if (sigma >= 0) return sys.lambda(right, family);
  const State du = right - left;
  const double d2 = du.squaredNorm();
  if (d2 == 0.0) return sys.lambda(left, family);
  return (sys.flux(right) - sys.flux(left)).dot(du) / d2;
}

}  // namespace wft
