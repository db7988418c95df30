#include "wft/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <map>
#include <sstream>
#include <tuple>

#include "wft/errors.hpp"
#include "wft/estimates.hpp"
#include "wft/registry.hpp"

namespace wft {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& msg) {
  fail(ErrorKind::ValidationError, path + ": " + msg);
}

const json& req(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  if (!j.contains(key)) bad(path + "." + key, "required field missing");
  return j.at(key);
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

double num_or(const json& j, const std::string& key, const std::string& path, double dflt) {
  if (!j.contains(key)) return dflt;
  return num(j.at(key), path + "." + key);
}

int int_or(const json& j, const std::string& key, const std::string& path, int dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) bad(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(num(j[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

State state(const json& j, int dim, const std::string& path) {
  State s(dim);
  if (j.is_number() && dim == 1) {
    s(0) = j.get<double>();
    return s;
  }
  const auto v = numbers(j, path);
  if (static_cast<int>(v.size()) != dim) bad(path, "expected " + std::to_string(dim) + " components");
  for (int i = 0; i < dim; ++i) s(i) = v[static_cast<std::size_t>(i)];
  return s;
}

PiecewiseConstant piecewise(const json& j, int dim, const std::string& path) {
  const auto br = numbers(req(j, "breaks", path), path + ".breaks");
  const auto& vals = req(j, "values", path);
  if (!vals.is_array() || vals.size() != br.size() + 1) bad(path + ".values", "needs breaks.size() + 1 entries");
  std::vector<State> v;
  for (std::size_t k = 0; k < vals.size(); ++k)
    v.push_back(state(vals[k], dim, path + ".values[" + std::to_string(k) + "]"));
  try {
    return PiecewiseConstant::from(br, v);
  } catch (const SolverError& e) {
    bad(path, e.what());
  }
}

PiecewiseLinearCurve curve(const json& j, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  if (j.contains("times")) {
    auto t = numbers(j.at("times"), path + ".times");
    auto x = numbers(req(j, "positions", path), path + ".positions");
    if (t.size() != x.size() || t.empty()) bad(path + ".positions", "must match times");
    for (std::size_t k = 1; k < t.size(); ++k)
      if (!(t[k] > t[k - 1])) bad(path + ".times", "must be strictly increasing");
    return PiecewiseLinearCurve(t, x, num_or(j, "tail_slope", path, 0.0));
  }
  return PiecewiseLinearCurve(num_or(j, "x0", path, 0.0), num_or(j, "slope", path, 0.0));
}

std::shared_ptr<const BoundaryMap> boundary_map(const json& j, const HyperbolicSystem& sys, int ell,
                                                const std::string& path) {
  const std::string name = j.is_null() ? (ell == 0 ? "identity" : "components") : j.value("name", "");
  if (name == "identity") return AffineBoundaryMap::identity(sys.base());
  if (name == "components") {
    std::vector<int> idx;
    if (!j.is_null() && j.contains("index")) {
      for (double d : numbers(j.at("index"), path + ".index")) idx.push_back(static_cast<int>(d));
    } else {
      for (int i = ell; i < sys.n(); ++i) idx.push_back(i);
    }
    return AffineBoundaryMap::components(idx, sys.base());
  }
  if (name == "relative-flux") return AffineBoundaryMap::relative_flux(num(req(j, "s", path), path + ".s"), sys.base());
  bad(path + ".name", "unknown boundary map '" + name + "' (identity, components, relative-flux)");
}

struct SineSpec {
  double a = 0, b = 1;
  std::vector<double> amp, waves;
};

std::function<PiecewiseConstant(double)> initial_data(const json& j, const HyperbolicSystem& sys,
                                                      const std::string& path) {
  const int n = sys.n();
  const State base = sys.base();
  if (!j.is_object()) bad(path, "expected an object");
  if (j.contains("breaks")) {
    auto u = piecewise(j, n, path);
    return [u](double) { return u; };
  }
  const auto& kind = req(j, "profile", path);
  if (!kind.is_string()) bad(path + ".profile", "expected a string");
  const std::string k = kind.get<std::string>();
  if (k == "indicator") {
    const double a = num(req(j, "a", path), path + ".a"), b = num(req(j, "b", path), path + ".b");
    if (!(b > a)) bad(path, "needs a < b");
    const State v = state(req(j, "value", path), n, path + ".value");
    auto u = PiecewiseConstant::indicator(a, b, v, base);
    return [u](double) { return u; };
  }
  if (k == "random-jumps") {
    const int count = int_or(j, "count", path, 20);
    const double tv = num_or(j, "tv", path, 0.3);
    if (count < 2) bad(path + ".count", "needs at least 2 jumps");
    if (!(tv > 0)) bad(path + ".tv", "must be positive");
    auto u = random_jump_data(sys, count, tv, static_cast<std::uint64_t>(int_or(j, "seed", path, 42)),
                              num_or(j, "start", path, 0.1), num_or(j, "spacing", path, 0.15));
    return [u](double) { return u; };
  }
  if (k == "sine") {
    SineSpec s;
    s.a = num(req(j, "a", path), path + ".a");
    s.b = num(req(j, "b", path), path + ".b");
    if (!(s.b > s.a)) bad(path, "needs a < b");
    s.amp = numbers(req(j, "amplitude", path), path + ".amplitude");
    s.waves = numbers(req(j, "waves", path), path + ".waves");
    if (static_cast<int>(s.amp.size()) != n || static_cast<int>(s.waves.size()) != n)
      bad(path, "amplitude and waves need one entry per component");
    SampledProfile p;
    p.a = s.a;
    p.b = s.b;
    p.outside = base;
    p.f = [s, base](double x) {
      State u = base;
      const double th = M_PI * (x - s.a) / (s.b - s.a);
      for (std::size_t i = 0; i < s.amp.size(); ++i)
        u(static_cast<Eigen::Index>(i)) += s.amp[i] * std::sin(s.waves[i] * th);
      return u;
    };
    return [p](double eps) { return approximate_profile(p, eps); };
  }
  bad(path + ".profile", "unknown profile '" + k + "' (indicator, random-jumps, sine)");
}

FunctionalWeights explicit_weights(const json& j, const std::string& path) {
  FunctionalWeights w;
  for (const auto& [key, v] : j.items()) {
    const double x = num(v, path + "." + key);
    if (key == "K") w.K = x;
    else if (key == "H1") w.H1 = x;
    else if (key == "H2") w.H2 = x;
    else if (key == "kappa1") w.kappa1 = x;
    else if (key == "kappa2") w.kappa2 = x;
    else if (key == "Kbar") w.Kbar = x;
    else if (key == "Kcheck") w.Kcheck = x;
    else if (key == "Khat") w.Khat = x;
    else bad(path + "." + key, "unknown weight");
  }
  return w;
}

const std::map<std::string, std::string>& builtins() {
  static const std::map<std::string, std::string> b = {
      {"advection-exact", R"({
  "name": "advection-exact",
  "system": {"name": "linear-advection", "params": {"speed": 1.0}},
  "boundary": {"gamma": {"x0": 0.0, "slope": 0.0}, "ell": 0, "margin": 0.5, "map": {"name": "identity"}},
  "initial": {"profile": "indicator", "a": 1.0, "b": 2.0, "value": 1.0},
  "solver": {"epsilon": 0.01, "rho": 0.01, "T": 5.0, "snapshots": [0.0, 1.0, 2.5, 5.0]},
  "weights": {"K": 1, "H1": 1, "H2": 1}
})"},
      {"psystem-boundary", R"({
  "name": "psystem-boundary",
  "system": {"name": "p-system"},
  "boundary": {"gamma": {"x0": 0.0, "slope": 0.0}, "ell": 1, "margin": 0.2,
               "map": {"name": "components", "index": [1]},
               "data": {"breaks": [0.3, 0.6, 1.0, 1.3, 1.7], "values": [0.0, 0.02, -0.01, 0.015, 0.0, 0.01]}},
  "initial": {"profile": "random-jumps", "count": 20, "tv": 0.3, "seed": 42, "start": 0.1, "spacing": 0.15},
  "solver": {"epsilon": 0.01, "rho": 0.01, "T": 2.0, "snapshots": [0.0, 0.5, 1.0, 2.0]},
  "weights": "fit",
  "fit": {"strength_amp": 0.05, "state_amp": 0.03, "data_amp": 0.02, "count": 1000},
  "xi_curve": {"gamma": {"x0": 0.5, "slope": 0.2}, "ell": 1, "margin": 0.2}
})"},
      {"psystem-smooth", R"({
  "name": "psystem-smooth",
  "system": {"name": "p-system"},
  "boundary": {"gamma": {"x0": 0.0, "slope": 0.0}, "ell": 1, "margin": 0.2,
               "map": {"name": "components", "index": [1]},
               "data": {"breaks": [0.5, 1.2], "values": [0.0, 0.03, -0.01]}},
  "initial": {"profile": "sine", "a": 0.0, "b": 3.0, "amplitude": [0.08, 0.05], "waves": [3, 2]},
  "solver": {"epsilon": 0.01, "rho": 0.01, "T": 2.0, "snapshots": [0.0, 1.0, 2.0]},
  "weights": "fit",
  "fit": {"strength_amp": 0.05, "state_amp": 0.03, "data_amp": 0.02, "count": 1000},
  "study": {"eps": [0.04, 0.02, 0.01, 0.005]}
})"},
      {"window-nonuniqueness", R"({
  "name": "window-nonuniqueness",
  "system": {"name": "linear-advection", "params": {"speed": 1.0}},
  "boundary": {"gamma": {"x0": 0.0, "slope": 0.0}, "ell": 0, "margin": 0.5, "map": {"name": "identity"}},
  "initial": {"profile": "indicator", "a": 0.0, "b": 1.0, "value": 1.0},
  "source": {"name": "nonlocal-window", "params": {"a": 0, "b": 1, "c": 3, "d": 4, "coef": 1.0},
             "eps_split": 0.01, "N": 10},
  "solver": {"epsilon": 0.005, "rho": 0.005, "T": 1.0, "snapshots": [0.0, 0.5, 1.0]},
  "weights": {"K": 1, "H1": 1, "H2": 1},
  "experiment": {"kind": "nonuniqueness", "coef": 1.0, "eps_split": 0.01, "eps_ft": 0.005, "N": 10}
})"},
  };
  return b;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

json fronts_json(const std::vector<std::uint64_t>& ids, const std::vector<int>& fam, const std::vector<double>& s) {
  json a = json::array();
  for (std::size_t k = 0; k < ids.size(); ++k)
    a.push_back({{"id", ids[k]}, {"family", k < fam.size() ? fam[k] : 0}, {"strength", k < s.size() ? s[k] : 0.0}});
  return a;
}

json property(bool pass, double value, double bound) {
  return {{"pass", pass}, {"value", value}, {"bound", bound}};
}

void write_report(const std::filesystem::path& path, const std::vector<std::tuple<std::string, double, double, bool>>& rows) {
  std::ofstream os(path);
  os << "quantity,value,bound,pass\n";
  for (const auto& [q, v, b, p] : rows) os << q << ',' << fmt(v) << ',' << fmt(b) << ',' << (p ? "true" : "false") << '\n';
}

}  // namespace

PiecewiseConstant random_jump_data(const HyperbolicSystem& sys, int count, double tv, std::uint64_t seed, double start,
                                   double spacing) {
  const int n = sys.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<State> incs;
  double total = 0;
  State sum = State::Zero(n);
  for (int k = 0; k + 1 < count; ++k) {
    State d(n);
    for (int i = 0; i < n; ++i) d(i) = U(rng);
    incs.push_back(d);
    total += d.norm();
    sum += d;
  }
  incs.push_back(-sum);
  total += sum.norm();
  std::vector<double> br;
  std::vector<State> v{sys.base()};
  for (int k = 0; k < count; ++k) {
    br.push_back(start + spacing * k + spacing / 3.0 * U(rng));
    v.push_back(v.back() + tv / total * incs[static_cast<std::size_t>(k)]);
  }
  v.back() = sys.base();
  return PiecewiseConstant::from(br, v);
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) fail(ErrorKind::ParseError, "scenario must be a JSON object");
  Scenario s;
  s.raw = j;
  s.name = j.value("name", "scenario");

  const auto& sj = req(j, "system", "scenario");
  const auto& sname = req(sj, "name", "system");
  if (!sname.is_string()) bad("system.name", "expected a string");
  s.system = SystemRegistry::global().make(sname.get<std::string>(), sj.value("params", json::object()));
  const auto& sys = *s.system;

  const auto& bj = req(j, "boundary", "scenario");
  const auto& ellj = req(bj, "ell", "boundary");
  if (!ellj.is_number_integer()) bad("boundary.ell", "expected an integer");
  s.boundary.ell = ellj.get<int>();
  if (s.boundary.ell < 0 || s.boundary.ell > sys.n()) bad("boundary.ell", "must lie in [0, n]");
  s.boundary.margin_c = num_or(bj, "margin", "boundary", 0.1);
  s.boundary.gamma = curve(req(bj, "gamma", "boundary"), "boundary.gamma");
  s.boundary.bmap = boundary_map(bj.contains("map") ? bj.at("map") : json(), sys, s.boundary.ell, "boundary.map");
  const int m = sys.n() - s.boundary.ell;
  if (bj.contains("data")) {
    s.boundary.gdata = piecewise(bj.at("data"), m, "boundary.data");
  } else {
    s.boundary.gdata = PiecewiseConstant::constant(State::Zero(m));
  }
  s.boundary.validate(sys);

  s.initial = initial_data(req(j, "initial", "scenario"), sys, "initial");

  const auto& vj = req(j, "solver", "scenario");
  s.solver.epsilon = num(req(vj, "epsilon", "solver"), "solver.epsilon");
  s.solver.rho = num(req(vj, "rho", "solver"), "solver.rho");
  if (vj.contains("event_budget")) s.solver.event_budget = static_cast<std::size_t>(num(vj.at("event_budget"), "solver.event_budget"));
  s.solver.delta0 = num_or(vj, "delta0", "solver", kInf);
  try {
    s.solver.validate();
  } catch (const SolverError& e) {
    bad("solver", e.what());
  }
  s.run.T = num_or(vj, "T", "solver", 1.0);
  if (!(s.run.T > 0)) bad("solver.T", "must be positive");
  if (vj.contains("snapshots")) s.run.snapshot_times = numbers(vj.at("snapshots"), "solver.snapshots");
  for (double t : s.run.snapshot_times)
    if (t < 0 || t > s.run.T) bad("solver.snapshots", "times must lie in [0, T]");
  std::sort(s.run.snapshot_times.begin(), s.run.snapshot_times.end());

  if (j.contains("source")) {
    const auto& src = j.at("source");
    const auto& nm = req(src, "name", "source");
    if (!nm.is_string()) bad("source.name", "expected a string");
    try {
      s.source = SourceRegistry::global().make(nm.get<std::string>(), src.value("params", json::object()), sys.base());
    } catch (const SolverError& e) {
      bad("source", e.what());
    }
    s.split.eps_split = num_or(src, "eps_split", "source", 0.1);
    s.split.N = int_or(src, "N", "source", 10);
    s.split.M = num_or(src, "M", "source", kInf);
    s.split.delta = num_or(src, "delta", "source", kInf);
    s.split.C = num_or(src, "C", "source", 0.0);
    s.split.project = src.value("project", true);
    s.split.T = s.run.T;
    try {
      s.split.validate();
    } catch (const SolverError& e) {
      bad("source", e.what());
    }
  }

  const json wj = j.contains("weights") ? j.at("weights") : json("fit");
  if (wj.is_string() && wj.get<std::string>() == "fit") {
    SampleOptions o;
    o.strength_amp = 0.05;
    o.state_amp = 0.03;
    o.data_amp = 0.02;
    if (j.contains("fit")) {
      const auto& f = j.at("fit");
      o.strength_amp = num_or(f, "strength_amp", "fit", o.strength_amp);
      o.state_amp = num_or(f, "state_amp", "fit", o.state_amp);
      o.data_amp = num_or(f, "data_amp", "fit", o.data_amp);
      o.count = static_cast<std::size_t>(int_or(f, "count", "fit", 1000));
      o.seed = static_cast<std::uint64_t>(int_or(f, "seed", "fit", 1));
    }
    s.weights = fit_weights(sys, s.boundary, o).weights;
  } else if (wj.is_object()) {
    s.weights = explicit_weights(wj, "weights");
  } else {
    bad("weights", "expected \"fit\" or an object");
  }

  if (j.contains("xi_curve")) {
    const auto& xj = j.at("xi_curve");
    CurveSpec c;
    c.curve = curve(req(xj, "gamma", "xi_curve"), "xi_curve.gamma");
    c.ell_tilde = int_or(xj, "ell", "xi_curve", 0);
    c.c = num_or(xj, "margin", "xi_curve", 0.1);
    c.validate(sys);
    s.xi_curve = c;
  }

  if (j.contains("experiment")) {
    s.experiment = j.at("experiment");
    const auto& k = req(s.experiment, "kind", "experiment");
    if (!k.is_string() || (k != "restriction" && k != "nonuniqueness"))
      bad("experiment.kind", "expected \"restriction\" or \"nonuniqueness\"");
    if (k == "restriction") {
      CurveSpec c;
      c.curve = curve(req(s.experiment, "gamma_tilde", "experiment"), "experiment.gamma_tilde");
      c.ell_tilde = int_or(s.experiment, "ell", "experiment", s.boundary.ell);
      c.c = num_or(s.experiment, "margin", "experiment", s.boundary.margin_c);
      c.validate(sys);
    }
  }
  return s;
}

std::vector<std::string> builtin_scenarios() {
  std::vector<std::string> out;
  for (const auto& [k, v] : builtins()) out.push_back(k);
  return out;
}

json builtin_scenario_json(const std::string& name) {
  auto it = builtins().find(name);
  if (it == builtins().end()) fail(ErrorKind::ValidationError, "unknown built-in scenario '" + name + "'");
  return json::parse(it->second);
}

Scenario load_scenario(const std::string& path_or_name) {
  if (builtins().count(path_or_name)) return parse_scenario(builtin_scenario_json(path_or_name));
  std::ifstream in(path_or_name);
  if (!in) fail(ErrorKind::ParseError, "cannot open scenario '" + path_or_name + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, path_or_name + ": " + e.what());
  }
  return parse_scenario(j);
}

void write_snapshots_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream os(path);
  const int n = traj.system ? traj.system->n() : traj.final.trace.size();
  os << "time,x_left,x_right";
  for (int i = 1; i <= n; ++i) os << ",u_" << i;
  os << '\n';
  auto emit = [&](const Configuration& c) {
    double xl = c.boundary_position;
    const State* u = &c.trace;
    auto row = [&](double xr) {
      os << fmt(c.time) << ',' << fmt(xl) << ',' << (std::isfinite(xr) ? fmt(xr) : "inf");
      for (int i = 0; i < n; ++i) os << ',' << fmt((*u)(i));
      os << '\n';
    };
    for (const auto& f : c.fronts) {
      if (f.position > xl) {
        row(f.position);
        xl = f.position;
      }
      u = &f.right_state;
    }
    row(kInf);
  };
  bool final_written = false;
  for (const auto& s : traj.snapshots) {
    emit(s.cfg);
    final_written = final_written || s.cfg.time == traj.final.time;
  }
  if (!final_written) emit(traj.final);
}

void write_events_jsonl(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream os(path);
  for (const auto& e : traj.events) {
    json r = {{"index", e.index},
              {"time", e.time},
              {"kind", to_string(e.kind)},
              {"location", e.location},
              {"incoming", fronts_json(e.incoming_ids, e.incoming_families, e.incoming_strengths)},
              {"outgoing", fronts_json(e.outgoing_ids, e.outgoing_families, e.outgoing_strengths)},
              {"dV", e.dV},
              {"dQ", e.dQ},
              {"dUpsilon", e.dUpsilon}};
    os << r.dump() << '\n';
  }
}

void write_functionals_csv(const Trajectory& traj, const std::filesystem::path& path, const std::vector<XiSample>* xi) {
  std::ofstream os(path);
  os << "time,V,Vg,Q,Upsilon" << (xi ? ",Xi" : "") << '\n';
  std::size_t k = 0;
  for (const auto& f : traj.functionals) {
    os << fmt(f.time) << ',' << fmt(f.V) << ',' << fmt(f.Vg) << ',' << fmt(f.Q) << ',' << fmt(f.Upsilon);
    if (xi) {
      while (k + 1 < xi->size() && (*xi)[k + 1].time <= f.time) ++k;
      os << ',' << (xi->empty() ? std::string("0") : fmt((*xi)[k].Xi));
    }
    os << '\n';
  }
}

RunOutcome run_scenario(const Scenario& s, const std::filesystem::path& out_dir) {
  const auto& sys = *s.system;
  const auto t0 = std::chrono::steady_clock::now();
  const PiecewiseConstant u0 = s.initial_datum();
  RunOutcome out;
  json props = json::object();
  std::vector<SplitStepLog> steps;
  if (s.source) {
    auto r = euler_polygonal(sys, s.boundary, *s.source, s.solver, s.weights, s.split, u0, s.run);
    out.traj = std::move(r.traj);
    steps = std::move(r.steps);
  } else {
    out.traj = run(sys, s.boundary, s.solver, s.weights, u0, s.run);
  }
  const double runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& traj = out.traj;
  const double eps = s.solver.epsilon;

  // Invariant suite. Source steps may raise Upsilon; only homogeneous events are checked.
  double worst_dU = -kInf, worst_q = -kInf, worst_np = 0.0;
  std::size_t bad_u = 0, bad_q = 0, collisions = 0;
  for (const auto& e : traj.events) {
    worst_np = std::max(worst_np, e.np_total);
    if (e.kind == EventKind::Initial || e.kind == EventKind::SplitStep) continue;
    worst_dU = std::max(worst_dU, e.dUpsilon);
    if (e.dUpsilon > 1e-9) ++bad_u;
    if (e.kind == EventKind::FrontCollision && e.physical_pair && e.product > 0) {
      ++collisions;
      const double r = e.dQ + 0.5 * e.product;
      worst_q = std::max(worst_q, r);
      if (r > 1e-12) ++bad_q;
    }
  }
  props["upsilon_nonincreasing"] = property(bad_u == 0, std::isfinite(worst_dU) ? worst_dU : 0.0, 1e-9);
  props["upsilon_nonincreasing"]["violations"] = bad_u;
  props["interaction_decrease"] = property(bad_q == 0, std::isfinite(worst_q) ? worst_q : 0.0, 0.0);
  props["interaction_decrease"]["collisions"] = collisions;
  props["np_total"] = property(worst_np <= 2 * eps, worst_np, 2 * eps);

  double worst_bc = 0.0;
  bool chained = true;
  auto check_cfg = [&](const Configuration& c) {
    try {
      c.check(1e-8);
    } catch (const SolverError&) {
      chained = false;
    }
    worst_bc = std::max(worst_bc, (s.boundary.bmap->eval(c.trace) - s.boundary.g(c.time)).norm());
  };
  for (const auto& sn : traj.snapshots) check_cfg(sn.cfg);
  check_cfg(traj.final);
  props["chaining"] = property(chained, chained ? 0.0 : 1.0, 0.0);
  props["boundary_condition"] = property(worst_bc <= 1e-6, worst_bc, 1e-6);

  if (s.source && !steps.empty()) {
    // Reported only: growth rate of Upsilon and of the L1 norm per unit time.
    double up = 0.0, l1 = 0.0;
    for (const auto& st : steps)
      if (st.time > 0) {
        up = std::max(up, (st.Upsilon - steps.front().Upsilon) / st.time);
        l1 = std::max(l1, (st.l1 - steps.front().l1) / st.time);
      }
    props["upsilon_growth_rate"] = {{"value", up}};
    props["l1_growth_rate"] = {{"value", l1}};
  }

  std::vector<XiSample> xi;
  if (s.xi_curve) {
    xi = compute_xi(traj, *s.xi_curve, s.weights);
    std::vector<double> splits;
    for (const auto& e : traj.events)
      if (e.kind == EventKind::SplitStep) splits.push_back(e.time);
    double worst = 0.0;
    for (std::size_t k = 1; k < xi.size(); ++k)
      if (std::find(splits.begin(), splits.end(), xi[k].time) == splits.end())
        worst = std::max(worst, xi[k].Xi - xi[k - 1].Xi);
    props["xi_nonincreasing"] = property(worst <= 1e-9, worst, 1e-9);
  }

  bool pass = true;
  for (const auto& [k, v] : props.items())
    if (v.contains("pass")) pass = pass && v["pass"].get<bool>();

  json summary = {{"scenario", s.name},
                  {"system", sys.name()},
                  {"T", s.run.T},
                  {"epsilon", eps},
                  {"rho", s.solver.rho},
                  {"events", traj.events.size()},
                  {"fronts_final", traj.final.fronts.size()},
                  {"runtime_s", runtime},
                  {"weights",
                   {{"K", s.weights.K}, {"H1", s.weights.H1}, {"H2", s.weights.H2}, {"Kcheck", s.weights.Kcheck},
                    {"Khat", s.weights.Khat}}},
                  {"properties", props}};

  std::vector<std::tuple<std::string, double, double, bool>> report;
  if (!s.experiment.is_null()) {
    const auto& ej = s.experiment;
    if (ej.at("kind") == "nonuniqueness") {
      const auto r = nonuniqueness_experiment(num_or(ej, "coef", "experiment", 1.0),
                                              num_or(ej, "eps_split", "experiment", 0.01),
                                              num_or(ej, "eps_ft", "experiment", 0.005), int_or(ej, "N", "experiment", 10));
      report.emplace_back("restricted_norm", r.restricted_norm, 0.0, r.restricted_norm == 0.0);
      report.emplace_back("trace_sup", r.trace_sup, 0.0, r.trace_sup == 0.0);
      report.emplace_back("mass_on_34", r.mass_on_34, 0.0, r.mass_on_34 > 0.0);
    } else {
      CurveSpec c;
      c.curve = curve(ej.at("gamma_tilde"), "experiment.gamma_tilde");
      c.ell_tilde = int_or(ej, "ell", "experiment", s.boundary.ell);
      c.c = num_or(ej, "margin", "experiment", s.boundary.margin_c);
      auto times = s.run.snapshot_times;
      if (times.empty() || times.back() != s.run.T) times.push_back(s.run.T);
      const auto r = restriction_experiment(sys, s.boundary, s.solver, u0, c, s.run.T, times);
      const double bound = num_or(ej, "factor", "experiment", 5.0) * eps;
      report.emplace_back("discrepancy", r.discrepancy, bound, r.discrepancy <= bound);
    }
    json e = json::object();
    bool epass = true;
    for (const auto& [q, v, b, p] : report) {
      e[q] = property(p, v, b);
      epass = epass && p;
    }
    summary["experiment"] = e;
    pass = pass && epass;
  }
  summary["pass"] = pass;
  out.pass = pass;
  out.summary = summary;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_snapshots_csv(traj, out_dir / "snapshots.csv");
    write_events_jsonl(traj, out_dir / "events.jsonl");
    write_functionals_csv(traj, out_dir / "functionals.csv", s.xi_curve ? &xi : nullptr);
    if (!report.empty()) write_report(out_dir / "report.csv", report);
    std::ofstream(out_dir / "summary.json") << summary.dump(2) << '\n';
  }
  return out;
}

StudyResult convergence_study(const Scenario& s, const std::vector<double>& eps_grid, const std::filesystem::path& out_dir) {
  if (eps_grid.size() < 3) fail(ErrorKind::ValidationError, "study: needs at least 3 epsilon values");
  for (std::size_t k = 1; k < eps_grid.size(); ++k)
    if (!(eps_grid[k] < eps_grid[k - 1]) || !(eps_grid[k] > 0))
      fail(ErrorKind::ValidationError, "study: epsilon values must be positive and decreasing");
  const double rho_ratio = s.solver.rho / s.solver.epsilon;
  const double split_ratio = s.split.eps_split / s.solver.epsilon;
  std::vector<PiecewiseConstant> finals(eps_grid.size());
  std::vector<double> gammaT(eps_grid.size());
  for (std::size_t k = 0; k < eps_grid.size(); ++k) {
    SolverParams p = s.solver;
    p.epsilon = eps_grid[k];
    p.rho = rho_ratio * eps_grid[k];
    RunOptions o = s.run;
    o.snapshot_times.clear();
    o.record_history = false;
    o.record_events = false;
    const auto u0 = s.initial(eps_grid[k]);
    Trajectory tr;
    if (s.source) {
      SplittingParams sp = s.split;
      sp.eps_split = split_ratio * eps_grid[k];
      tr = euler_polygonal(*s.system, s.boundary, *s.source, p, s.weights, sp, u0, o).traj;
    } else {
      tr = run(*s.system, s.boundary, p, s.weights, u0, o);
    }
    finals[k] = tr.final.to_function();
    gammaT[k] = tr.final.boundary_position;
  }
  StudyResult r;
  r.eps = eps_grid;
  for (std::size_t k = 0; k + 1 < finals.size(); ++k)
    r.distances.push_back(l1_distance(finals[k], finals[k + 1], gammaT[k]));
  r.strictly_decreasing = true;
  for (std::size_t k = 0; k + 1 < r.distances.size(); ++k) {
    const double q = r.distances[k] > 0 ? r.distances[k + 1] / r.distances[k] : kInf;
    r.ratios.push_back(q);
    r.max_ratio = std::max(r.max_ratio, q);
    r.strictly_decreasing = r.strictly_decreasing && r.distances[k + 1] < r.distances[k];
  }
  r.pass = r.strictly_decreasing && r.max_ratio <= 0.75;

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream os(out_dir / "study.csv");
    os << "epsilon,distance_to_next,ratio\n";
    for (std::size_t k = 0; k < r.eps.size(); ++k) {
      os << fmt(r.eps[k]) << ',' << (k < r.distances.size() ? fmt(r.distances[k]) : "") << ','
         << (k >= 1 && k - 1 < r.ratios.size() ? fmt(r.ratios[k - 1]) : "") << '\n';
    }
    json sm = {{"scenario", s.name}, {"eps", r.eps}, {"distances", r.distances}, {"ratios", r.ratios},
               {"max_ratio", r.max_ratio}, {"strictly_decreasing", r.strictly_decreasing}, {"pass", r.pass}};
    std::ofstream(out_dir / "summary.json") << sm.dump(2) << '\n';
  }
  return r;
}

}  // namespace wft
