#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sheetqv/diffusion.hpp"

namespace sheetqv {

/// A named bounded function usable as volatility sigma, weight f or drift.
struct RegisteredFunction {
  std::string name;
  ScalarFunction fn;
  double bound = 0.0;
  Smoothness smoothness = Smoothness::R2;
};

class RegistryMiss : public std::invalid_argument {
 public:
  explicit RegistryMiss(const std::string& name)
      : std::invalid_argument("unknown function '" + name + "'") {}
};

/// Name -> function table. Registration probes the declared bound and
/// rejects functions that exceed it or declare an infinite bound.
class FunctionRegistry {
 public:
  /// "one", "cos", "inv_quad" (1/(1+x^2)) and "zero".
  static const FunctionRegistry& builtin();

  void add(RegisteredFunction entry);
  bool contains(std::string_view name) const;
  const RegisteredFunction& at(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, RegisteredFunction, std::less<>> entries_;
};

/// Model with volatility `sigma_name` and drift M(s,t,w) = g(w) for the
/// registered `drift_name` ("zero" gives the driftless model).
ModelSpec make_model(const FunctionRegistry& registry,
                     std::string_view sigma_name,
                     std::string_view drift_name = "zero");

}  // namespace sheetqv
