#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include "sheetqv/grid.hpp"
#include "sheetqv/sheet.hpp"

namespace sheetqv {

/// Declared regularity of the volatility: R1 is C^4 with bounded
/// derivatives, R2 is C^8 with bounded derivatives.
enum class Smoothness { R1, R2 };

using ScalarFunction = std::function<double(double)>;
/// Drift density M evaluated as a function of (s, t, W(s,t)).
using DriftFunction = std::function<double(double, double, double)>;

/// Y(s,t) = int_[0,s]x[0,t] sigma(W) dW + int_[0,s]x[0,t] M du dv.
struct ModelSpec {
  ScalarFunction sigma;
  Smoothness smoothness = Smoothness::R2;
  /// Empty means M = 0.
  DriftFunction drift;
  /// R = sup |sigma|.
  double sigma_bound = 0.0;
  std::string sigma_name = "custom";
  std::string drift_name = "zero";

  /// Spot-checks |sigma| <= sigma_bound and drift finiteness on a fixed
  /// 10^4-point probe set. Throws std::invalid_argument on violation.
  void validate() const;
};

/// Raised when sigma or the drift is non-finite on some simulation cell.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(const std::string& what, Cell cell)
      : std::runtime_error(what), cell_(cell) {}
  Cell cell() const { return cell_; }

 private:
  Cell cell_;
};

/// Y on the fine simulation grid, plus sigma^2(W) at the lower-left corner of
/// every fine cell (the quadrature density for C).
struct DiffusionPath {
  Lattice values;
  CellField sigma_squared;
  ModelSpec model;
  SeedSpec driving_seed;

  const Grid& grid() const { return values.grid(); }
};

/// Euler-Ito scheme on the sheet's grid m: the increment of Y over fine cell
/// (k, l) is sigma(W_c) dW_kl + M(s_c, t_c, W_c) / m^2 with c the lower-left
/// corner. Y is the double partial sum of these increments.
DiffusionPath simulate_diffusion(const ModelSpec& model,
                                 const BrownianSheet& sheet);

/// Restriction of Y to G_n; n must divide the path's resolution.
Lattice observe_on_grid(const DiffusionPath& path, std::size_t n);

/// C(s,t) = int_[0,s]x[0,t] sigma^2(W) by the lower-left Riemann rule on the
/// fine cells, with cells crossing s or t weighted by their clipped area.
double true_quadratic_variation(const ModelSpec& model,
                                const BrownianSheet& sheet,
                                const ParamPoint& point);
/// Same quantity from the density cached during simulation.
double true_quadratic_variation(const DiffusionPath& path,
                                const ParamPoint& point);
/// int_[0,s]x[0,t] sigma^4(W), same quadrature.
double integrated_quarticity(const DiffusionPath& path, const ParamPoint& point);

/// Fine-grid partial-sum field of C at every coarse grid point of G_n.
Lattice quadratic_variation_field(const DiffusionPath& path, std::size_t n);

}  // namespace sheetqv
