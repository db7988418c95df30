#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/front_tracking.hpp"
#include "wft/splitting.hpp"
#include "wft/traces.hpp"

namespace wft {

/// A validated, runnable problem description. See README for the JSON schema.
struct Scenario {
  std::string name;
  nlohmann::json raw;
  std::shared_ptr<HyperbolicSystem> system;
  Boundary boundary;
  /// Initial datum at a given epsilon (profiles are re-approximated, piecewise data is returned as is).
  std::function<PiecewiseConstant(double)> initial;
  std::shared_ptr<SourceOp> source;  // null for homogeneous problems
  SplittingParams split;
  SolverParams solver;
  FunctionalWeights weights;
  RunOptions run;
  std::optional<CurveSpec> xi_curve;
  nlohmann::json experiment;  // null when absent

  PiecewiseConstant initial_datum() const { return initial(solver.epsilon); }
};

/// Parses and validates; errors are ValidationError / ParseError naming the field path.
Scenario parse_scenario(const nlohmann::json& j);
/// Path to a JSON file, or the name of a built-in scenario.
Scenario load_scenario(const std::string& path_or_name);

std::vector<std::string> builtin_scenarios();
nlohmann::json builtin_scenario_json(const std::string& name);

/// Data with `count` jumps, total variation exactly `tv`, back to the base state after the last jump.
PiecewiseConstant random_jump_data(const HyperbolicSystem& sys, int count, double tv, std::uint64_t seed,
                                   double start, double spacing);

// Output writers.
void write_snapshots_csv(const Trajectory& traj, const std::filesystem::path& path);
void write_events_jsonl(const Trajectory& traj, const std::filesystem::path& path);
void write_functionals_csv(const Trajectory& traj, const std::filesystem::path& path,
                           const std::vector<XiSample>* xi = nullptr);

struct RunOutcome {
  nlohmann::json summary;  // includes "pass" and per-property records
  bool pass = false;
  Trajectory traj;
};

/// Runs the scenario and its invariant suite; writes snapshots.csv, events.jsonl, functionals.csv,
/// summary.json (and report.csv for experiments) when out_dir is non-empty.
RunOutcome run_scenario(const Scenario& s, const std::filesystem::path& out_dir = {});

struct StudyResult {
  std::vector<double> eps;
  std::vector<double> distances;  // |u^{eps_k}(T) - u^{eps_{k+1}}(T)|
  std::vector<double> ratios;     // distances[k+1] / distances[k]
  double max_ratio = 0.0;
  bool strictly_decreasing = false;
  bool pass = false;  // decreasing with every ratio <= 0.75
};

/// Runs each epsilon (rho scaled along) and compares successive final states.
StudyResult convergence_study(const Scenario& s, const std::vector<double>& eps_grid,
                              const std::filesystem::path& out_dir = {});

}  // namespace wft
