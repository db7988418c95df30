#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "wft/errors.hpp"
#include "wft/scenario.hpp"

using namespace wft;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kPropertyFail = 1, kInvalid = 2, kSolver = 3 };

int exit_for(const SolverError& e) {
  return e.kind() == ErrorKind::ValidationError || e.kind() == ErrorKind::ParseError ||
                 e.kind() == ErrorKind::NotNonCharacteristic
             ? kInvalid
             : kSolver;
}

struct Overrides {
  std::vector<double> snapshots;
  std::optional<std::size_t> budget;
};

Scenario load(const std::string& what, const Overrides& o) {
  Scenario s = load_scenario(what);
  if (!o.snapshots.empty()) {
    for (double t : o.snapshots)
      if (t < 0 || t > s.run.T) fail(ErrorKind::ValidationError, "--snapshots: times must lie in [0, T]");
    s.run.snapshot_times = o.snapshots;
    std::sort(s.run.snapshot_times.begin(), s.run.snapshot_times.end());
  }
  if (o.budget) s.solver.event_budget = *o.budget;
  return s;
}

template <class F>
int guarded(F&& f) {
  try {
    return f();
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolver;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Front tracking for boundary problems of hyperbolic systems"};
  app.require_subcommand(1);

  std::vector<std::string> scenarios;
  std::string out_dir = "out";
  Overrides ov;
  std::vector<double> eps;

  auto add_common = [&](CLI::App* sub, bool many) {
    if (many)
      sub->add_option("--scenario", scenarios, "Scenario file or built-in name (repeatable)")->required();
    else
      sub->add_option("--scenario", scenarios, "Scenario file or built-in name")->required()->expected(1);
  };

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  add_common(validate, false);
  auto* list = app.add_subcommand("list", "List the built-in scenarios");

  auto* runc = app.add_subcommand("run", "Run one scenario and its invariant suite");
  add_common(runc, false);
  runc->add_option("--out-dir", out_dir, "Output directory");
  runc->add_option("--snapshots", ov.snapshots, "Snapshot times (override)")->delimiter(',');
  runc->add_option("--budget", ov.budget, "Event budget (override)");

  auto* sweep = app.add_subcommand("sweep", "Run several scenarios in parallel");
  add_common(sweep, true);
  sweep->add_option("--out-dir", out_dir, "Output directory (one subdirectory per scenario)");
  sweep->add_option("--snapshots", ov.snapshots, "Snapshot times (override)")->delimiter(',');
  sweep->add_option("--budget", ov.budget, "Event budget (override)");

  auto* study = app.add_subcommand("study", "Convergence study in epsilon");
  add_common(study, false);
  study->add_option("--out-dir", out_dir, "Output directory");
  study->add_option("--eps", eps, "Epsilon grid, at least 3 decreasing values")->delimiter(',');
  study->add_option("--budget", ov.budget, "Event budget (override)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalid;
  }

  if (*list) {
    for (const auto& n : builtin_scenarios()) std::cout << n << '\n';
    return kOk;
  }

  if (*validate) {
    return guarded([&] {
      const auto s = load(scenarios.front(), ov);
      std::cout << "ok: " << s.name << " (" << s.system->name() << ", n=" << s.system->n()
                << ", ell=" << s.boundary.ell << ")\n";
      return kOk;
    });
  }

  if (*runc) {
    return guarded([&] {
      const auto s = load(scenarios.front(), ov);
      const auto r = run_scenario(s, out_dir);
      std::cout << r.summary.dump(2) << '\n';
      return r.pass ? kOk : kPropertyFail;
    });
  }

  if (*study) {
    return guarded([&] {
      const auto s = load(scenarios.front(), ov);
      if (eps.empty() && s.raw.contains("study")) eps = s.raw["study"].value("eps", std::vector<double>{});
      if (eps.empty()) fail(ErrorKind::ValidationError, "study: pass --eps or add study.eps to the scenario");
      const auto r = convergence_study(s, eps, out_dir);
      for (std::size_t k = 0; k < r.distances.size(); ++k)
        std::printf("eps=%-8g dist_to_next=%.6g%s\n", r.eps[k], r.distances[k],
                    k ? (" ratio=" + std::to_string(r.ratios[k - 1])).c_str() : "");
      std::printf("%s (max ratio %.4f)\n", r.pass ? "PASS" : "FAIL", r.max_ratio);
      return r.pass ? kOk : kPropertyFail;
    });
  }

  // sweep
  const auto n = static_cast<long>(scenarios.size());
  std::vector<int> codes(scenarios.size(), kOk);
  std::vector<std::string> names(scenarios.size()), errors(scenarios.size());
  std::vector<double> runtimes(scenarios.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (long k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    names[i] = fs::path(scenarios[i]).stem().string();
    codes[i] = guarded([&] {
      try {
        const auto s = load(scenarios[i], ov);
        names[i] = s.name;
        const auto r = run_scenario(s, fs::path(out_dir) / s.name);
        runtimes[i] = r.summary.value("runtime_s", 0.0);
        return r.pass ? kOk : kPropertyFail;
      } catch (const std::exception& e) {
        errors[i] = e.what();
        throw;
      }
    });
  }
  fs::create_directories(out_dir);
  std::ofstream os(fs::path(out_dir) / "sweep.csv");
  os << "scenario,exit_code,runtime_s,error\n";
  int worst = kOk;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    os << names[i] << ',' << codes[i] << ',' << runtimes[i] << ",\"" << errors[i] << "\"\n";
    std::cout << (codes[i] == kOk ? "PASS " : "FAIL ") << names[i] << '\n';
    worst = std::max(worst, codes[i]);
  }
  return worst;
}
