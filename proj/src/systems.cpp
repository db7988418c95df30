#include "wft/systems.hpp"

#include <cmath>

#include "wft/errors.hpp"

namespace wft {

namespace {

Box box1(double lo, double hi) {
  Box b;
  b.lo = State::Constant(1, lo);
  b.hi = State::Constant(1, hi);
  return b;
}

Eigensystem scalar_eigen(double lambda) {
  Eigensystem e;
  e.values = Eigen::VectorXd::Constant(1, lambda);
  e.right = Matrix::Ones(1, 1);
  e.left = Matrix::Ones(1, 1);
  return e;
}

}  // namespace

// ---- linear advection ----

LinearAdvection::LinearAdvection(double speed, double lo, double hi)
    : HyperbolicSystem(1, {FieldType::LinearlyDegenerate}, box1(lo, hi), State::Zero(1)), a_(speed) {
  finalize(3);
}

State LinearAdvection::flux(const State& u) const { return a_ * u; }
Matrix LinearAdvection::jacobian(const State&) const { return Matrix::Constant(1, 1, a_); }
Eigensystem LinearAdvection::eigen(const State&) const { return scalar_eigen(a_); }

State LinearAdvection::analytic_rarefaction(const State& u, int, double sigma) const {
  return u + State::Constant(1, sigma);
}

CurvePoint LinearAdvection::analytic_shock(const State& u, int, double sigma) const {
  return {u + State::Constant(1, sigma), a_};
}

// ---- Burgers ----

Burgers::Burgers(double lo, double hi)
    : HyperbolicSystem(1, {FieldType::GenuinelyNonlinear}, box1(lo, hi), State::Zero(1)) {
  finalize(3);
}

State Burgers::flux(const State& u) const { return 0.5 * u.cwiseProduct(u); }
Matrix Burgers::jacobian(const State& u) const { return Matrix::Constant(1, 1, u(0)); }
Eigensystem Burgers::eigen(const State& u) const { return scalar_eigen(u(0)); }

State Burgers::analytic_rarefaction(const State& u, int, double sigma) const {
  return u + State::Constant(1, sigma);
}

CurvePoint Burgers::analytic_shock(const State& u, int, double sigma) const {
  return {u + State::Constant(1, sigma), u(0) + 0.5 * sigma};
}

// ---- isothermal p-system ----

namespace {

Box pbox(double rlo, double rhi, double qlo, double qhi) {
  Box b;
  b.lo = State(2);
  b.hi = State(2);
  b.lo << rlo, qlo;
  b.hi << rhi, qhi;
  return b;
}

State pstate(double rho, double q) {
  State u(2);
  u << rho, q;
  return u;
}

}  // namespace

IsothermalPSystem::IsothermalPSystem(double rho_lo, double rho_hi, double q_lo, double q_hi)
    : HyperbolicSystem(2, {FieldType::GenuinelyNonlinear, FieldType::GenuinelyNonlinear},
                       pbox(rho_lo, rho_hi, q_lo, q_hi), pstate(1.0, 0.0)) {
  if (rho_lo <= 0) fail(ErrorKind::ValidationError, "p-system density box must be positive");
  finalize(11);
}

State IsothermalPSystem::flux(const State& u) const {
  const double rho = u(0), q = u(1);
  return pstate(q, q * q / rho + rho);
}

Matrix IsothermalPSystem::jacobian(const State& u) const {
  const double v = u(1) / u(0);
  Matrix J(2, 2);
  J << 0.0, 1.0, 1.0 - v * v, 2.0 * v;
  return J;
}

Eigensystem IsothermalPSystem::eigen(const State& u) const {
  const double rho = u(0);
  if (!(rho > 0)) fail(ErrorKind::NonHyperbolic, "p-system density must be positive");
  const double v = u(1) / rho;
  Eigensystem e;
  e.values = Eigen::Vector2d(v - 1.0, v + 1.0);
  e.right.resize(2, 2);
  e.right << -rho, rho, -rho * (v - 1.0), rho * (v + 1.0);
  e.left = e.right.inverse();
  return e;
}

State IsothermalPSystem::analytic_rarefaction(const State& u, int family, double sigma) const {
  const double rho0 = u(0), v0 = u(1) / u(0);
  const double rho = family == 1 ? rho0 * std::exp(-sigma) : rho0 * std::exp(sigma);
  return pstate(rho, rho * (v0 + sigma));
}

CurvePoint IsothermalPSystem::analytic_shock(const State& u, int family, double sigma) const {
  const double rho0 = u(0), v0 = u(1) / u(0);
  const double root = std::sqrt(sigma * sigma + 4.0);
  const double z = family == 1 ? 0.5 * (-sigma + root) : 0.5 * (sigma + root);
  const double rho = rho0 * z * z;
  const double v = v0 + sigma;
  return {pstate(rho, rho * v), family == 1 ? v0 - z : v0 + z};
}

// ---- custom ----

CustomSystem::CustomSystem(CustomSystemDef def)
    : HyperbolicSystem(def.n, def.fields, def.omega, def.base), def_(std::move(def)) {
  if (!def_.flux) fail(ErrorKind::ValidationError, "custom system '" + def_.name + "' has no flux");
  finalize(def_.n == 1 ? 21 : 7);
}

Matrix CustomSystem::jacobian(const State& u) const {
  return def_.jacobian ? def_.jacobian(u) : HyperbolicSystem::jacobian(u);
}

}  // namespace wft
