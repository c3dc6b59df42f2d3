#include "sheetqv/registry.hpp"

#include <cmath>

namespace sheetqv {

const FunctionRegistry& FunctionRegistry::builtin() {
  static const FunctionRegistry registry = [] {
    FunctionRegistry r;
    r.add({"one", [](double) { return 1.0; }, 1.0, Smoothness::R2});
    r.add({"zero", [](double) { return 0.0; }, 0.0, Smoothness::R2});
    r.add({"cos", [](double x) { return std::cos(x); }, 1.0, Smoothness::R2});
    r.add({"inv_quad", [](double x) { return 1.0 / (1.0 + x * x); }, 1.0,
           Smoothness::R2});
    return r;
  }();
  return registry;
}

void FunctionRegistry::add(RegisteredFunction entry) {
  if (entry.name.empty()) throw std::invalid_argument("function needs a name");
  ModelSpec probe;
  probe.sigma = entry.fn;
  probe.sigma_bound = entry.bound;
  probe.sigma_name = entry.name;
  probe.validate();
  const std::string key = entry.name;
  entries_.insert_or_assign(key, std::move(entry));
}

bool FunctionRegistry::contains(std::string_view name) const {
  return entries_.find(name) != entries_.end();
}

const RegisteredFunction& FunctionRegistry::at(std::string_view name) const {
  const auto it = entries_.find(name);
  if (it == entries_.end()) throw RegistryMiss(std::string(name));
  return it->second;
}

std::vector<std::string> FunctionRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

ModelSpec make_model(const FunctionRegistry& registry,
                     std::string_view sigma_name, std::string_view drift_name) {
  const RegisteredFunction& sigma = registry.at(sigma_name);
  const RegisteredFunction& drift = registry.at(drift_name);
  ModelSpec model;
  model.sigma = sigma.fn;
  model.smoothness = sigma.smoothness;
  model.sigma_bound = sigma.bound;
  model.sigma_name = sigma.name;
  model.drift_name = drift.name;
  if (drift.name != "zero") {
    model.drift = [g = drift.fn](double, double, double w) { return g(w); };
  }
  return model;
}

}  // namespace sheetqv
