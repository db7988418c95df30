#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/system.hpp"

namespace wft {

using SystemFactory = std::function<std::shared_ptr<HyperbolicSystem>(const nlohmann::json& params)>;

/// Name -> system factory. Built-ins: "linear-advection", "burgers", "p-system".
/// Register custom systems (e.g. a CustomSystem) with add().
class SystemRegistry {
 public:
  static SystemRegistry& global();

  void add(const std::string& name, SystemFactory factory);
  bool contains(const std::string& name) const;
  std::shared_ptr<HyperbolicSystem> make(const std::string& name,
                                         const nlohmann::json& params = nlohmann::json::object()) const;
  std::vector<std::string> names() const;

 private:
  SystemRegistry();
  mutable std::mutex mu_;
  std::map<std::string, SystemFactory> factories_;
};

}  // namespace wft
