#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "wft/system.hpp"

namespace wft {

/// u_t + a u_x = 0, one linearly degenerate field.
class LinearAdvection final : public HyperbolicSystem {
 public:
  explicit LinearAdvection(double speed = 1.0, double lo = -2.0, double hi = 2.0);
  std::string name() const override { return "linear-advection"; }
  State flux(const State& u) const override;
  Matrix jacobian(const State& u) const override;
  Eigensystem eigen(const State& u) const override;
  bool has_analytic_curves() const override { return true; }
  State analytic_rarefaction(const State& u, int family, double sigma) const override;
  CurvePoint analytic_shock(const State& u, int family, double sigma) const override;
  double speed() const { return a_; }

 private:
  double a_;
};

/// u_t + (u^2/2)_x = 0.
class Burgers final : public HyperbolicSystem {
 public:
  explicit Burgers(double lo = -2.0, double hi = 2.0);
  std::string name() const override { return "burgers"; }
  State flux(const State& u) const override;
  Matrix jacobian(const State& u) const override;
  Eigensystem eigen(const State& u) const override;
  bool has_analytic_curves() const override { return true; }
  State analytic_rarefaction(const State& u, int family, double sigma) const override;
  CurvePoint analytic_shock(const State& u, int family, double sigma) const override;
};

/// Isothermal p-system in conservative variables (rho, q):
/// rho_t + q_x = 0, q_t + (q^2/rho + rho)_x = 0. Base state (1, 0).
class IsothermalPSystem final : public HyperbolicSystem {
 public:
  IsothermalPSystem(double rho_lo = 0.7, double rho_hi = 1.4, double q_lo = -0.2, double q_hi = 0.2);
  std::string name() const override { return "p-system"; }
  State flux(const State& u) const override;
  Matrix jacobian(const State& u) const override;
  Eigensystem eigen(const State& u) const override;
  bool has_analytic_curves() const override { return true; }
  State analytic_rarefaction(const State& u, int family, double sigma) const override;
  CurvePoint analytic_shock(const State& u, int family, double sigma) const override;
};

/// Plug-in point: any system given by flux (+ optional Jacobian), field tags and box.
/// Wave curves are always computed numerically.
struct CustomSystemDef {
  std::string name;
  int n = 1;
  std::function<State(const State&)> flux;
  std::function<Matrix(const State&)> jacobian;  // optional
  std::vector<FieldType> fields;
  Box omega;
  State base;
};

class CustomSystem final : public HyperbolicSystem {
 public:
  explicit CustomSystem(CustomSystemDef def);
  std::string name() const override { return def_.name; }
  State flux(const State& u) const override { return def_.flux(u); }
  Matrix jacobian(const State& u) const override;

 private:
  CustomSystemDef def_;
};

}  // namespace wft
