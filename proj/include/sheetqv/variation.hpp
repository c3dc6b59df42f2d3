#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sheetqv/diffusion.hpp"
#include "sheetqv/grid.hpp"
#include "sheetqv/rng.hpp"
#include "sheetqv/sheet.hpp"
#include "sheetqv/stats.hpp"

namespace sheetqv {

enum class VariationKind {
  weighted_qv_X,
  raw_qv_V,
  fourth_power_S,
  normalized_error_Y,
};

std::string_view to_string(VariationKind kind);

/// Partial-sum field over G_n: value(i, j) is the sum of the per-cell
/// summands over cells a <= i, b <= j. Vanishes on both axes.
struct VariationProcess {
  Lattice values;
  VariationKind kind;

  const Grid& grid() const { return values.grid(); }
  double value_at(const ParamPoint& p) const { return values.value_at(p); }
};

/// Signals a statistic that cannot be studentized (S^n = 0, i.e. sigma
/// vanishing on the whole rectangle).
class DegenerateStatistic : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// X^n(s,t) = sum_{i<=[ns], j<=[nt]} n f(W_corner) (|dW_ij|^2 - 1/n^2).
VariationProcess weighted_qv_process(const ScalarFunction& f,
                                     const BrownianSheet& sheet_obs);

/// Predictable bracket of X^n: (2/n^2) sum f^2(W_corner) over the index
/// rectangle of `point`. Its expectation is Var X^n(point).
double predictable_bracket(const ScalarFunction& f,
                           const BrownianSheet& sheet_obs,
                           const ParamPoint& point);

/// V^n as a full field over G_n.
VariationProcess raw_qv_process(const Lattice& observed);
/// S^n = n^2 sum |dY_ij|^4 as a full field over G_n.
VariationProcess fourth_power_process(const Lattice& observed);
/// Y^n = n (V^n - C) at every point of G_n, with C from the fine quadrature.
VariationProcess normalized_error_process(const DiffusionPath& path,
                                          std::size_t n);

/// V^n(s,t) = sum over the index rectangle of |dY_ij|^2.
double raw_qv(const Lattice& observed, const ParamPoint& point);
/// S^n(s,t) = n^2 sum over the index rectangle of |dY_ij|^4.
double fourth_power_stat(const Lattice& observed, const ParamPoint& point);

/// T = n (v_n - c_true) / sqrt(s_n). Asymptotically sqrt(2/3) N(0,1).
double studentized(double v_n, double c_true, double s_n, std::size_t n);

/// V^n +- z_{1-alpha/2} sqrt(2/3) sqrt(S^n) / n.
Interval confidence_interval(double v_n, double s_n, std::size_t n,
                             double alpha);

/// Per-replicate estimation record.
struct EstimateReport {
  std::size_t n = 0;
  std::size_t refinement = 0;
  std::string sigma_name;
  ParamPoint point{1.0, 1.0};
  double v_n = 0.0;
  double c_true = 0.0;
  double s_n = 0.0;
  double studentized = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  SeedSpec seed;
};

/// Builds the report for one simulated path observed on G_n.
EstimateReport estimate(const DiffusionPath& path, std::size_t n,
                        const ParamPoint& point, double alpha);

/// Column header of the reports CSV (no trailing newline).
std::string_view report_csv_header();
/// One CSV row; seed is written as master_seed:stream_index and reals with
/// 17 significant digits.
std::string report_csv_row(const EstimateReport& report);

}  // namespace sheetqv
