#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "wft/front_tracking.hpp"

namespace wft {

/// Source operator G: piecewise-constant state -> integrable function (per unit time).
class SourceOp {
 public:
  virtual ~SourceOp() = default;
  virtual std::string name() const = 0;
  virtual PiecewiseConstant apply(const PiecewiseConstant& u, double t) const = 0;
  /// L1 Lipschitz constant L1 and TV bound L2 of the image.
  virtual double lipschitz_L1() const = 0;
  virtual double tv_bound() const = 0;
};

class ZeroSource final : public SourceOp {
 public:
  explicit ZeroSource(State base) : base_(std::move(base)) {}
  std::string name() const override { return "zero"; }
  PiecewiseConstant apply(const PiecewiseConstant&, double) const override {
    return PiecewiseConstant::constant(State::Zero(base_.size()));
  }
  double lipschitz_L1() const override { return 0.0; }
  double tv_bound() const override { return 0.0; }

 private:
  State base_;
};

/// G(u)(x) = coef * (int_a^b (u - base)) * chi_[c,d)(x).
class NonlocalWindowSource final : public SourceOp {
 public:
  NonlocalWindowSource(double a, double b, double c, double d, double coef, State base);
  std::string name() const override { return "nonlocal-window"; }
  PiecewiseConstant apply(const PiecewiseConstant& u, double t) const override;
  double lipschitz_L1() const override { return std::abs(coef_) * (d_ - c_); }
  /// Two jumps of size |coef| * int_a^b |u - base| <= |coef| * ||u - base||_L1.
  double tv_bound() const override { return 2.0 * std::abs(coef_); }

 private:
  double a_, b_, c_, d_, coef_;
  State base_;
};

/// Sources by name. Parameters come from a JSON object.
class SourceRegistry {
 public:
  using Factory = std::function<std::unique_ptr<SourceOp>(const nlohmann::json&, const State& base)>;
  static SourceRegistry& global();
  void add(const std::string& name, Factory f);
  bool contains(const std::string& name) const { return f_.count(name) != 0; }
  std::unique_ptr<SourceOp> make(const std::string& name, const nlohmann::json& params, const State& base) const;
  std::vector<std::string> names() const;

 private:
  SourceRegistry();
  std::map<std::string, Factory> f_;
};

/// Cell averages of u on [k/N, (k+1)/N], k = -1-N^2 .. -1+N^2; zero elsewhere.
PiecewiseConstant project_PiN(const PiecewiseConstant& u, int N);

struct SplittingParams {
  double eps_split = 0.1;  // splitting step
  int N = 10;              // projection resolution
  double T = 1.0;
  double M = kInf;      // L1 budget: ||u(t)|| <= M e^{Ct} + C t
  double delta = kInf;  // Glimm budget: Upsilon(t) <= delta - C (T - t)
  double C = 0.0;
  bool project = true;  // apply Pi_N to G(u) before adding it

  void validate() const;
};

struct SplitStepLog {
  double time = 0.0;
  double Upsilon = 0.0;
  double l1 = 0.0;
  std::size_t fronts = 0;
};

/// Source increment at the tracker's current time: dt * Pi_N(G(u)) restricted to [gamma(t), inf).
PiecewiseConstant source_increment(const FrontTracker& ft, const SourceOp& src, double dt, const SplittingParams& sp);

/// One splitting step: homogeneous tracking for dt, then the source increment.
EventRecord splitting_step(FrontTracker& ft, const SourceOp& src, double dt, const SplittingParams& sp);

struct PolygonalResult {
  Trajectory traj;
  std::vector<SplitStepLog> steps;  // after every split, first entry at t = 0
};

/// Euler eps-polygonal: k = [T / eps] full steps and a final partial one.
PolygonalResult euler_polygonal(const HyperbolicSystem& sys, const Boundary& bdry, const SourceOp& src,
                                const SolverParams& params, const FunctionalWeights& w, const SplittingParams& sp,
                                const PiecewiseConstant& u0, const RunOptions& opt);

enum class FlowVariant {
  Evolved,  // G evaluated at the transported state
  Tangent   // G evaluated at the initial state
};

/// One local-flow step of length t from u at t0, as a function.
PiecewiseConstant local_flow(const HyperbolicSystem& sys, const Boundary& bdry, const SourceOp& src,
                             const SolverParams& params, const SplittingParams& sp, const PiecewiseConstant& u,
                             double t0, double t, FlowVariant variant = FlowVariant::Evolved);

/// L1 distance between F(k tau, t0 + tau) o F(tau, t0) u and F((k+1) tau, t0) u.
double verify_local_flow(const HyperbolicSystem& sys, const Boundary& bdry, const SourceOp& src,
                         const SolverParams& params, const SplittingParams& sp, const PiecewiseConstant& u, double t0,
                         int k, double tau, FlowVariant variant = FlowVariant::Evolved);

}  // namespace wft
