#include "wft/registry.hpp"

#include "wft/errors.hpp"
#include "wft/systems.hpp"

namespace wft {

namespace {

std::pair<double, double> range(const nlohmann::json& p, const char* key, double lo, double hi) {
  if (!p.contains(key)) return {lo, hi};
  const auto& r = p.at(key);
  if (!r.is_array() || r.size() != 2) fail(ErrorKind::ValidationError, std::string("system.params.") + key +
                                                                           " must be [lo, hi]");
  return {r[0].get<double>(), r[1].get<double>()};
}

}  // namespace

SystemRegistry::SystemRegistry() {
  factories_["linear-advection"] = [](const nlohmann::json& p) {
    auto [lo, hi] = range(p, "box", -2.0, 2.0);
    return std::make_shared<LinearAdvection>(p.value("speed", 1.0), lo, hi);
  };
  factories_["burgers"] = [](const nlohmann::json& p) {
    auto [lo, hi] = range(p, "box", -2.0, 2.0);
    return std::make_shared<Burgers>(lo, hi);
  };
  factories_["p-system"] = [](const nlohmann::json& p) {
    auto [rlo, rhi] = range(p, "rho_range", 0.7, 1.4);
    auto [qlo, qhi] = range(p, "q_range", -0.2, 0.2);
    return std::make_shared<IsothermalPSystem>(rlo, rhi, qlo, qhi);
  };
}

SystemRegistry& SystemRegistry::global() {
  static SystemRegistry reg;
  return reg;
}

void SystemRegistry::add(const std::string& name, SystemFactory factory) {
  std::lock_guard lock(mu_);
  factories_[name] = std::move(factory);
}

bool SystemRegistry::contains(const std::string& name) const {
  std::lock_guard lock(mu_);
  return factories_.count(name) > 0;
}

std::shared_ptr<HyperbolicSystem> SystemRegistry::make(const std::string& name,
                                                       const nlohmann::json& params) const {
  SystemFactory f;
  {
    std::lock_guard lock(mu_);
    auto it = factories_.find(name);
    if (it == factories_.end()) fail(ErrorKind::ValidationError, "unknown system '" + name + "'");
    f = it->second;
  }
  return f(params.is_null() ? nlohmann::json::object() : params);
}

std::vector<std::string> SystemRegistry::names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto& [k, v] : factories_) out.push_back(k);
  return out;
}

}  // namespace wft
