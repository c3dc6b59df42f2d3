#include "sheetqv/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sheetqv {

namespace {

constexpr int kProbeCount = 10000;
constexpr double kProbeHalfWidth = 10.0;

std::string cell_text(std::size_t k, std::size_t l) {
  return "(" + std::to_string(k) + "," + std::to_string(l) + ")";
}

/// Clipped-area weights of the fine cells along one axis up to coordinate x.
std::vector<double> axis_weights(double x, std::size_t m) {
  const std::size_t full = floor_index(x, m);
  const double h = 1.0 / static_cast<double>(m);
  std::vector<double> w(full, h);
  if (full < m) {
    const double rest = x - static_cast<double>(full) * h;
    if (rest > 0.0) w.push_back(std::min(rest, h));
  }
  return w;
}

template <typename Transform>
double clipped_cell_sum(const CellField& density, const ParamPoint& point,
                        Transform transform) {
  const std::size_t m = density.n();
  const std::vector<double> ws = axis_weights(point.s(), m);
  const std::vector<double> wt = axis_weights(point.t(), m);
  double total = 0.0;
  for (std::size_t k = 1; k <= ws.size(); ++k) {
    double row = 0.0;
    for (std::size_t l = 1; l <= wt.size(); ++l) {
      row += transform(density(k, l)) * wt[l - 1];
    }
    total += row * ws[k - 1];
  }
  return total;
}

}  // namespace

void ModelSpec::validate() const {
  if (!sigma) throw std::invalid_argument("model has no volatility function");
  if (!(sigma_bound >= 0.0) || !std::isfinite(sigma_bound)) {
    throw std::invalid_argument("sigma_bound must be finite and >= 0");
  }
  for (int p = 0; p < kProbeCount; ++p) {
    const double x =
        -kProbeHalfWidth + 2.0 * kProbeHalfWidth * p / (kProbeCount - 1);
    const double v = sigma(x);
    if (!std::isfinite(v) || std::abs(v) > sigma_bound) {
      throw std::invalid_argument("volatility '" + sigma_name + "' exceeds its bound " +
                                  std::to_string(sigma_bound) + " at x=" +
                                  std::to_string(x));
    }
    if (drift) {
      const double u = static_cast<double>(p % 100) / 99.0;
      const double w = static_cast<double>(p / 100) / 99.0;
      if (!std::isfinite(drift(u, w, x))) {
        throw std::invalid_argument("drift '" + drift_name +
                                    "' is not finite on the probe set");
      }
    }
  }
}

DiffusionPath simulate_diffusion(const ModelSpec& model,
                                 const BrownianSheet& sheet) {
  const std::size_t m = sheet.n();
  const double h = sheet.grid().spacing();
  const double area = h * h;
  const CellField& dw = sheet.increments();
  CellField dy(m);
  CellField sigma_sq(m);
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t l = 1; l <= m; ++l) {
      const double w = sheet(k - 1, l - 1);
      const double vol = model.sigma(w);
      if (!std::isfinite(vol)) {
        throw SimulationError("non-finite volatility at fine cell " +
                                  cell_text(k, l),
                              Cell{k, l});
      }
      double inc = vol * dw(k, l);
      if (model.drift) {
        const double drift =
            model.drift(static_cast<double>(k - 1) * h,
                        static_cast<double>(l - 1) * h, w);
        if (!std::isfinite(drift)) {
          throw SimulationError("non-finite drift at fine cell " +
                                    cell_text(k, l),
                                Cell{k, l});
        }
        inc += drift * area;
      }
      dy(k, l) = inc;
      sigma_sq(k, l) = vol * vol;
    }
  }
  return DiffusionPath{accumulate(dy), std::move(sigma_sq), model,
                       sheet.seed()};
}

Lattice observe_on_grid(const DiffusionPath& path, std::size_t n) {
  const std::size_t m = path.values.n();
  if (n == 0 || m % n != 0) {
    throw std::invalid_argument("observe_on_grid: n=" + std::to_string(n) +
                                " does not divide m=" + std::to_string(m));
  }
  if (n == m) return path.values;
  const std::size_t r = m / n;
  Lattice out{Grid(n)};
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) out(i, j) = path.values(i * r, j * r);
  }
  return out;
}

double true_quadratic_variation(const ModelSpec& model,
                                const BrownianSheet& sheet,
                                const ParamPoint& point) {
  const std::size_t m = sheet.n();
  CellField density(m);
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t l = 1; l <= m; ++l) {
      const double vol = model.sigma(sheet(k - 1, l - 1));
      density(k, l) = vol * vol;
    }
  }
  return clipped_cell_sum(density, point, [](double v) { return v; });
}

double true_quadratic_variation(const DiffusionPath& path,
                                const ParamPoint& point) {
  return clipped_cell_sum(path.sigma_squared, point,
                          [](double v) { return v; });
}

double integrated_quarticity(const DiffusionPath& path,
                             const ParamPoint& point) {
  return clipped_cell_sum(path.sigma_squared, point,
                          [](double v) { return v * v; });
}

Lattice quadratic_variation_field(const DiffusionPath& path, std::size_t n) {
  const std::size_t m = path.values.n();
  if (n == 0 || m % n != 0) {
    throw std::invalid_argument("quadratic_variation_field: n must divide m");
  }
  const std::size_t r = m / n;
  const double area = 1.0 / (static_cast<double>(m) * static_cast<double>(m));
  CellField coarse(n);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      double total = 0.0;
      for (std::size_t k = (i - 1) * r + 1; k <= i * r; ++k) {
        for (std::size_t l = (j - 1) * r + 1; l <= j * r; ++l) {
          total += path.sigma_squared(k, l);
        }
      }
      coarse(i, j) = total * area;
    }
  }
  return accumulate(coarse);
}

}  // namespace sheetqv
