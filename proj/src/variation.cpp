#include "sheetqv/variation.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace sheetqv {

namespace {

constexpr double kTwoThirdsRoot = 0.81649658092772603273;  // sqrt(2/3)

std::string cell_text(std::size_t i, std::size_t j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

template <typename Summand>
double rectangle_sum(const Lattice& observed, const ParamPoint& point,
                     Summand summand) {
  const std::size_t n = observed.n();
  const std::size_t ie = floor_index(point.s(), n);
  const std::size_t je = floor_index(point.t(), n);
  double total = 0.0;
  for (std::size_t i = 1; i <= ie; ++i) {
    double row = 0.0;
    for (std::size_t j = 1; j <= je; ++j) {
      row += summand(rectangle_increment(observed, i, j));
    }
    total += row;
  }
  return total;
}

template <typename Summand>
VariationProcess increment_process(const Lattice& observed, VariationKind kind,
                                   Summand summand) {
  const std::size_t n = observed.n();
  CellField cells(n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      cells(i, j) = summand(rectangle_increment(observed, i, j));
    }
  }
  return VariationProcess{accumulate(cells), kind};
}

void append_real(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

std::string_view to_string(VariationKind kind) {
  switch (kind) {
    case VariationKind::weighted_qv_X:
      return "weighted_qv_X";
    case VariationKind::raw_qv_V:
      return "raw_qv_V";
    case VariationKind::fourth_power_S:
      return "fourth_power_S";
    case VariationKind::normalized_error_Y:
      return "normalized_error_Y";
  }
  return "unknown";
}

VariationProcess weighted_qv_process(const ScalarFunction& f,
                                     const BrownianSheet& sheet_obs) {
  const std::size_t n = sheet_obs.n();
  const double nd = static_cast<double>(n);
  const double cell_area = 1.0 / (nd * nd);
  const CellField& dw = sheet_obs.increments();
  CellField xi(n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const double weight = f(sheet_obs(i - 1, j - 1));
      if (!std::isfinite(weight)) {
        throw SimulationError("non-finite weight at cell " + cell_text(i, j),
                              Cell{i, j});
      }
      const double d = dw(i, j);
      xi(i, j) = nd * weight * (d * d - cell_area);
    }
  }
  return VariationProcess{accumulate(xi), VariationKind::weighted_qv_X};
}

double predictable_bracket(const ScalarFunction& f,
                           const BrownianSheet& sheet_obs,
                           const ParamPoint& point) {
  const std::size_t n = sheet_obs.n();
  const std::size_t ie = floor_index(point.s(), n);
  const std::size_t je = floor_index(point.t(), n);
  double total = 0.0;
  for (std::size_t i = 1; i <= ie; ++i) {
    for (std::size_t j = 1; j <= je; ++j) {
      const double v = f(sheet_obs(i - 1, j - 1));
      total += v * v;
    }
  }
  const double nd = static_cast<double>(n);
  return 2.0 * total / (nd * nd);
}

VariationProcess raw_qv_process(const Lattice& observed) {
  return increment_process(observed, VariationKind::raw_qv_V,
                           [](double d) { return d * d; });
}

VariationProcess fourth_power_process(const Lattice& observed) {
  const double n2 = static_cast<double>(observed.n()) *
                    static_cast<double>(observed.n());
  return increment_process(observed, VariationKind::fourth_power_S,
                           [n2](double d) { return n2 * d * d * d * d; });
}

VariationProcess normalized_error_process(const DiffusionPath& path,
                                          std::size_t n) {
  const Lattice observed = observe_on_grid(path, n);
  const Lattice qv = raw_qv_process(observed).values;
  const Lattice c = quadratic_variation_field(path, n);
  Lattice out{Grid(n)};
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) out(i, j) = nd * (qv(i, j) - c(i, j));
  }
  return VariationProcess{std::move(out), VariationKind::normalized_error_Y};
}

double raw_qv(const Lattice& observed, const ParamPoint& point) {
  return rectangle_sum(observed, point, [](double d) { return d * d; });
}

double fourth_power_stat(const Lattice& observed, const ParamPoint& point) {
  const double n2 = static_cast<double>(observed.n()) *
                    static_cast<double>(observed.n());
  return n2 * rectangle_sum(observed, point,
                            [](double d) { return d * d * d * d; });
}

double studentized(double v_n, double c_true, double s_n, std::size_t n) {
  if (!(s_n > 0.0)) {
    throw DegenerateStatistic(
        "fourth-power statistic is zero: volatility vanishes on the rectangle");
  }
  return static_cast<double>(n) * (v_n - c_true) / std::sqrt(s_n);
}

Interval confidence_interval(double v_n, double s_n, std::size_t n,
                             double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("confidence level alpha must lie in (0,1)");
  }
  if (!(s_n > 0.0)) {
    throw DegenerateStatistic("cannot build an interval with S^n = 0");
  }
  const double z = normal_quantile(1.0 - 0.5 * alpha);
  const double half =
      z * kTwoThirdsRoot * std::sqrt(s_n) / static_cast<double>(n);
  return {v_n - half, v_n + half};
}

EstimateReport estimate(const DiffusionPath& path, std::size_t n,
                        const ParamPoint& point, double alpha) {
  const Lattice observed = observe_on_grid(path, n);
  EstimateReport r;
  r.n = n;
  r.refinement = path.values.n() / n;
  r.sigma_name = path.model.sigma_name;
  r.point = point;
  r.v_n = raw_qv(observed, point);
  r.c_true = true_quadratic_variation(path, point);
  r.s_n = fourth_power_stat(observed, point);
  r.studentized = studentized(r.v_n, r.c_true, r.s_n, n);
  const Interval ci = confidence_interval(r.v_n, r.s_n, n, alpha);
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.seed = path.driving_seed;
  return r;
}

std::string_view report_csv_header() {
  return "seed,n,r,sigma_name,point_s,point_t,v_n,c_true,s_n,studentized,"
         "ci_low,ci_high";
}

std::string report_csv_row(const EstimateReport& r) {
  std::string out = std::to_string(r.seed.master_seed) + ":" +
                    std::to_string(r.seed.stream_index) + "," +
                    std::to_string(r.n) + "," + std::to_string(r.refinement) +
                    "," + r.sigma_name;
  for (double v : {r.point.s(), r.point.t(), r.v_n, r.c_true, r.s_n,
                   r.studentized, r.ci_low, r.ci_high}) {
    out += ',';
    append_real(out, v);
  }
  return out;
}

}  // namespace sheetqv
