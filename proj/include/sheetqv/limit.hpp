#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "sheetqv/diffusion.hpp"
#include "sheetqv/grid.hpp"
#include "sheetqv/sheet.hpp"

namespace sheetqv {

/// X(z) = sqrt(2) int_[0,z] f(W) dB on the product of the W and B spaces,
/// sampled on the common fine grid.
struct LimitProcess {
  Lattice values;
  std::string f_name;
  SeedSpec driving_W_seed;
  SeedSpec independent_B_seed;

  const Grid& grid() const { return values.grid(); }
};

/// Cumulative sums of sqrt(2) f(W_corner) dB over the fine cells. Both
/// sheets must share the grid and come from streams with different roles.
LimitProcess simulate_limit(const ScalarFunction& f,
                            const BrownianSheet& sheet_W,
                            const BrownianSheet& sheet_B,
                            std::string f_name = "custom");

/// Cells (i0, i1] x (j0, j1] of a grid.
struct IndexBlock {
  std::size_t i0 = 0;
  std::size_t j0 = 0;
  std::size_t i1 = 0;
  std::size_t j1 = 0;
};

/// Conditional covariance given W of the limit increments over two blocks:
/// 2 sum over the intersection of f^2(W_corner) / m^2.
double conditional_covariance(const ScalarFunction& f,
                              const BrownianSheet& sheet_W,
                              const IndexBlock& a, const IndexBlock& b);

/// w(F, delta): largest |F(z) - F(z')| over grid points with
/// max-norm distance < delta. Exact on the lattice.
double modulus_of_continuity(const Lattice& field, double delta);

/// Monotone path phi(t) = (phi1(t), phi2(t)) through [0,1]^2 with
/// phi(0) = (0,0), each coordinate piecewise linear between breakpoints.
class SimpleFlow {
 public:
  using Breakpoints = std::vector<std::pair<double, double>>;

  SimpleFlow(Breakpoints phi1, Breakpoints phi2);

  static SimpleFlow diagonal();

  ParamPoint operator()(double t) const;

 private:
  static double evaluate(const Breakpoints& b, double t);

  Breakpoints phi1_;
  Breakpoints phi2_;
};

/// field(phi(t)) for each t (floor convention). t_list sorted in [0,1].
std::vector<double> evaluate_along_flow(const Lattice& field,
                                        const SimpleFlow& flow,
                                        const std::vector<double>& t_list);

/// One row of the tightness table: estimate of P[w(X^n, delta) >= eps].
struct TightnessRow {
  std::size_t n = 0;
  double delta = 0.0;
  double eps = 0.0;
  double p_hat = 0.0;
  std::size_t replicates = 0;
};

inline const std::vector<double> kDefaultTightnessDeltas = {
    1.0 / 32.0, 1.0 / 16.0, 1.0 / 8.0, 1.0 / 4.0};
inline const std::vector<double> kDefaultTightnessEps = {1.0, 2.0, 5.0};

/// w(X^n, delta) for each delta on one replicate sheet at resolution n.
std::vector<double> replicate_moduli(const ScalarFunction& f,
                                     const BrownianSheet& sheet_obs,
                                     const std::vector<double>& deltas);

/// Turns per-replicate moduli (one vector per replicate, one entry per delta)
/// into table rows for every (delta, eps).
std::vector<TightnessRow> tightness_table(
    std::size_t n, const std::vector<double>& deltas,
    const std::vector<double>& eps_list,
    const std::vector<std::vector<double>>& moduli);

/// Serial driver: N replicate sheets per n from (master_seed, k, driving_W).
std::vector<TightnessRow> tightness_diagnostic(
    const ScalarFunction& f, const std::vector<std::size_t>& n_list,
    const std::vector<double>& deltas, std::size_t replicates,
    const std::vector<double>& eps_list, std::uint64_t master_seed);

/// CSV with header n,delta,eps,p_hat,N.
void write_tightness_csv(std::ostream& out,
                         const std::vector<TightnessRow>& rows);

}  // namespace sheetqv
