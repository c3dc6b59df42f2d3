#include "sheetqv/limit.hpp"

#include "sheetqv/variation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace sheetqv {

LimitProcess simulate_limit(const ScalarFunction& f,
                            const BrownianSheet& sheet_W,
                            const BrownianSheet& sheet_B, std::string f_name) {
  if (sheet_W.grid() != sheet_B.grid()) {
    throw std::invalid_argument("simulate_limit: sheets must share a grid");
  }
  if (sheet_W.seed().role == sheet_B.seed().role) {
    throw std::invalid_argument(
        "simulate_limit: B must come from an independent stream");
  }
  const std::size_t m = sheet_W.n();
  const CellField& db = sheet_B.increments();
  CellField cells(m);
  for (std::size_t k = 1; k <= m; ++k) {
    for (std::size_t l = 1; l <= m; ++l) {
      const double weight = f(sheet_W(k - 1, l - 1));
      if (!std::isfinite(weight)) {
        throw SimulationError("non-finite weight at fine cell (" +
                                  std::to_string(k) + "," + std::to_string(l) +
                                  ")",
                              Cell{k, l});
      }
      cells(k, l) = std::numbers::sqrt2 * weight * db(k, l);
    }
  }
  return LimitProcess{accumulate(cells), std::move(f_name), sheet_W.seed(),
                      sheet_B.seed()};
}

double conditional_covariance(const ScalarFunction& f,
                              const BrownianSheet& sheet_W,
                              const IndexBlock& a, const IndexBlock& b) {
  const std::size_t m = sheet_W.n();
  for (const IndexBlock* blk : {&a, &b}) {
    if (blk->i0 > blk->i1 || blk->j0 > blk->j1 || blk->i1 > m || blk->j1 > m) {
      throw std::out_of_range("conditional_covariance: invalid block");
    }
  }
  const std::size_t i0 = std::max(a.i0, b.i0);
  const std::size_t i1 = std::min(a.i1, b.i1);
  const std::size_t j0 = std::max(a.j0, b.j0);
  const std::size_t j1 = std::min(a.j1, b.j1);
  if (i0 >= i1 || j0 >= j1) return 0.0;
  double total = 0.0;
  for (std::size_t k = i0 + 1; k <= i1; ++k) {
    for (std::size_t l = j0 + 1; l <= j1; ++l) {
      const double v = f(sheet_W(k - 1, l - 1));
      total += v * v;
    }
  }
  const double md = static_cast<double>(m);
  return 2.0 * total / (md * md);
}

namespace {

/// Sliding-window extreme over windows of `width` consecutive entries using a
/// monotone deque. `better(a, b)` is true when a should evict b.
template <typename Better>
std::vector<double> sliding_extreme(const std::vector<double>& in,
                                    std::size_t width, Better better) {
  std::vector<double> out;
  out.reserve(in.size() - width + 1);
  std::deque<std::size_t> window;
  for (std::size_t k = 0; k < in.size(); ++k) {
    while (!window.empty() && !better(in[window.back()], in[k])) {
      window.pop_back();
    }
    window.push_back(k);
    if (window.front() + width <= k) window.pop_front();
    if (k + 1 >= width) out.push_back(in[window.front()]);
  }
  return out;
}

/// Largest index gap h with h / n < delta.
std::size_t admissible_gap(double delta, std::size_t n) {
  const double x = delta * static_cast<double>(n);
  const double nearest = std::round(x);
  double c = std::ceil(x);
  if (std::abs(x - nearest) <= 1e-12 * std::max(1.0, x)) c = nearest;
  if (c <= 1.0) return 0;
  return std::min(static_cast<std::size_t>(c) - 1, n);
}

}  // namespace

double modulus_of_continuity(const Lattice& field, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("modulus_of_continuity: delta must be > 0");
  }
  const std::size_t n = field.n();
  const std::size_t gap = admissible_gap(delta, n);
  if (gap == 0) return 0.0;
  const std::size_t width = gap + 1;
  const std::size_t side = n + 1;
  const std::size_t out_side = side - width + 1;
  const auto larger = [](double a, double b) { return a > b; };
  const auto smaller = [](double a, double b) { return a < b; };

  // Row pass then column pass gives the max/min over every width x width
  // window of grid points.
  std::vector<double> row_max(side * out_side);
  std::vector<double> row_min(side * out_side);
  std::vector<double> line(side);
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) line[j] = field(i, j);
    const auto hi = sliding_extreme(line, width, larger);
    const auto lo = sliding_extreme(line, width, smaller);
    std::copy(hi.begin(), hi.end(), row_max.begin() + i * out_side);
    std::copy(lo.begin(), lo.end(), row_min.begin() + i * out_side);
  }
  double w = 0.0;
  std::vector<double> col_hi(side);
  std::vector<double> col_lo(side);
  for (std::size_t j = 0; j < out_side; ++j) {
    for (std::size_t i = 0; i < side; ++i) {
      col_hi[i] = row_max[i * out_side + j];
      col_lo[i] = row_min[i * out_side + j];
    }
    const auto hi = sliding_extreme(col_hi, width, larger);
    const auto lo = sliding_extreme(col_lo, width, smaller);
    for (std::size_t k = 0; k < hi.size(); ++k) w = std::max(w, hi[k] - lo[k]);
  }
  return w;
}

SimpleFlow::SimpleFlow(Breakpoints phi1, Breakpoints phi2)
    : phi1_(std::move(phi1)), phi2_(std::move(phi2)) {
  for (const Breakpoints* b : {&phi1_, &phi2_}) {
    if (b->size() < 2 || b->front().first != 0.0 || b->back().first != 1.0) {
      throw std::invalid_argument(
          "flow breakpoints must span t = 0 to t = 1");
    }
    if (b->front().second != 0.0) {
      throw std::invalid_argument("flow must start at the empty rectangle");
    }
    for (std::size_t k = 1; k < b->size(); ++k) {
      const auto& [t0, v0] = (*b)[k - 1];
      const auto& [t1, v1] = (*b)[k];
      if (!(t1 > t0)) {
        throw std::invalid_argument("flow breakpoints must increase in t");
      }
      if (v1 < v0 || v1 > 1.0) {
        throw std::invalid_argument(
            "flow coordinates must be nondecreasing within [0,1]");
      }
    }
  }
}

SimpleFlow SimpleFlow::diagonal() {
  return SimpleFlow({{0.0, 0.0}, {1.0, 1.0}}, {{0.0, 0.0}, {1.0, 1.0}});
}

double SimpleFlow::evaluate(const Breakpoints& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("flow parameter must lie in [0,1]");
  }
  const auto upper = std::lower_bound(
      b.begin(), b.end(), t,
      [](const std::pair<double, double>& bp, double x) { return bp.first < x; });
  if (upper->first == t) return upper->second;
  const auto lower = upper - 1;
  const double frac = (t - lower->first) / (upper->first - lower->first);
  const double v = lower->second + frac * (upper->second - lower->second);
  return std::clamp(v, lower->second, upper->second);
}

ParamPoint SimpleFlow::operator()(double t) const {
  return ParamPoint(evaluate(phi1_, t), evaluate(phi2_, t));
}

std::vector<double> evaluate_along_flow(const Lattice& field,
                                        const SimpleFlow& flow,
                                        const std::vector<double>& t_list) {
  if (!std::is_sorted(t_list.begin(), t_list.end())) {
    throw std::invalid_argument("evaluate_along_flow: t_list must be sorted");
  }
  std::vector<double> out;
  out.reserve(t_list.size());
  for (double t : t_list) out.push_back(field.value_at(flow(t)));
  return out;
}

std::vector<double> replicate_moduli(const ScalarFunction& f,
                                     const BrownianSheet& sheet_obs,
                                     const std::vector<double>& deltas) {
  const Lattice x = weighted_qv_process(f, sheet_obs).values;
  std::vector<double> out;
  out.reserve(deltas.size());
  for (double d : deltas) out.push_back(modulus_of_continuity(x, d));
  return out;
}

std::vector<TightnessRow> tightness_table(
    std::size_t n, const std::vector<double>& deltas,
    const std::vector<double>& eps_list,
    const std::vector<std::vector<double>>& moduli) {
  std::vector<TightnessRow> rows;
  for (double eps : eps_list) {
    for (std::size_t d = 0; d < deltas.size(); ++d) {
      std::size_t hits = 0;
      for (const auto& rep : moduli) {
        if (rep.at(d) >= eps) ++hits;
      }
      const double p =
          moduli.empty() ? 0.0
                         : static_cast<double>(hits) /
                               static_cast<double>(moduli.size());
      rows.push_back({n, deltas[d], eps, p, moduli.size()});
    }
  }
  return rows;
}

std::vector<TightnessRow> tightness_diagnostic(
    const ScalarFunction& f, const std::vector<std::size_t>& n_list,
    const std::vector<double>& deltas, std::size_t replicates,
    const std::vector<double>& eps_list, std::uint64_t master_seed) {
  if (n_list.empty() || deltas.empty() || eps_list.empty()) {
    throw std::invalid_argument("tightness_diagnostic: empty schedule");
  }
  std::vector<TightnessRow> rows;
  for (std::size_t n : n_list) {
    std::vector<std::vector<double>> moduli;
    moduli.reserve(replicates);
    for (std::size_t k = 0; k < replicates; ++k) {
      const BrownianSheet sheet =
          generate_sheet(Grid(n), derive_seed(master_seed, k,
                                              SheetRole::driving_W));
      moduli.push_back(replicate_moduli(f, sheet, deltas));
    }
    auto table = tightness_table(n, deltas, eps_list, moduli);
    rows.insert(rows.end(), table.begin(), table.end());
  }
  return rows;
}

void write_tightness_csv(std::ostream& out,
                         const std::vector<TightnessRow>& rows) {
  out << "n,delta,eps,p_hat,N\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%zu\n", r.n,
                  r.delta, r.eps, r.p_hat, r.replicates);
    out << buf;
  }
}

}  // namespace sheetqv
