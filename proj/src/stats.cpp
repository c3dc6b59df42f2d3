#include "sheetqv/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sheetqv {

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must lie in (0,1)");
  }
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

TestVerdict make_verdict(std::string gate, std::size_t n, double statistic,
                         double threshold, std::size_t n_obs,
                         std::string description) {
  TestVerdict v;
  v.gate = std::move(gate);
  v.n = n;
  v.statistic = statistic;
  v.threshold = threshold;
  v.pass = statistic <= threshold;
  v.n_obs = n_obs;
  v.description = std::move(description);
  return v;
}

double ks_distance(std::span<const double> values,
                   const std::function<double(double)>& cdf) {
  if (values.empty()) throw std::invalid_argument("ks_distance: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double count = static_cast<double>(sorted.size());
  double distance = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const double f = cdf(sorted[k]);
    const double above = static_cast<double>(k + 1) / count - f;
    const double below = f - static_cast<double>(k) / count;
    distance = std::max({distance, above, below});
  }
  return distance;
}

double ks_distance(const Sample& sample, double target_sd) {
  if (!(target_sd > 0.0)) {
    throw std::invalid_argument("ks_distance: target_sd must be positive");
  }
  return ks_distance(sample.values, [target_sd](double x) {
    return normal_cdf(x / target_sd);
  });
}

double ks_critical_value(std::size_t n_obs, double alpha) {
  if (n_obs == 0) throw std::invalid_argument("ks_critical_value: n_obs = 0");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ks_critical_value: alpha must lie in (0,1)");
  }
  // Kolmogorov limit law: P(K > x) = 2 sum_k (-1)^(k-1) exp(-2 k^2 x^2).
  const auto tail = [](double x) {
    double total = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = std::exp(-2.0 * k * k * x * x);
      total += (k % 2 == 1 ? term : -term);
      if (term < 1e-18) break;
    }
    return 2.0 * total;
  };
  double lo = 0.2;
  double hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n_obs));
}

Estimate mean_with_se(std::span<const double> values) {
  const std::size_t count = values.size();
  if (count < 2) throw std::invalid_argument("need at least 2 observations");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(count);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(count - 1);
  return {mean, std::sqrt(var / static_cast<double>(count))};
}

Estimate moment_with_se(const Sample& sample, int order) {
  const std::vector<double>& x = sample.values;
  if (x.size() < 2) throw std::invalid_argument("need at least 2 observations");
  if (order == 1) return mean_with_se(x);
  if (order != 2) throw std::invalid_argument("moment order must be 1 or 2");

  const double count = static_cast<double>(x.size());
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= count;
  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : x) {
    const double d2 = (v - mean) * (v - mean);
    m2 += d2;
    m4 += d2 * d2;
  }
  const double var = m2 / (count - 1.0);
  m4 /= count;
  // Var(s^2) ~ (mu4 - sigma^4 (n-3)/(n-1)) / n
  const double se2 = (m4 - var * var * (count - 3.0) / (count - 1.0)) / count;
  return {var, std::sqrt(std::max(se2, 0.0))};
}

Estimate coverage_rate(std::span<const Interval> intervals,
                       std::span<const double> truths) {
  if (intervals.size() != truths.size()) {
    throw std::invalid_argument("coverage_rate: length mismatch");
  }
  if (intervals.empty()) throw std::invalid_argument("coverage_rate: empty");
  std::size_t hits = 0;
  for (std::size_t k = 0; k < truths.size(); ++k) {
    if (intervals[k].low <= truths[k] && truths[k] <= intervals[k].high) ++hits;
  }
  const double count = static_cast<double>(truths.size());
  const double rate = static_cast<double>(hits) / count;
  return {rate, std::sqrt(rate * (1.0 - rate) / count)};
}

double rate_slope(std::span<const double> ns, std::span<const double> errors) {
  if (ns.size() != errors.size()) {
    throw std::invalid_argument("rate_slope: length mismatch");
  }
  if (ns.size() < 3) throw std::invalid_argument("rate_slope: need >= 3 points");
  const std::size_t count = ns.size();
  std::vector<double> lx(count);
  std::vector<double> ly(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!(ns[k] > 0.0) || !(errors[k] > 0.0)) {
      throw std::invalid_argument("rate_slope: inputs must be positive");
    }
    lx[k] = std::log(ns[k]);
    ly[k] = std::log(errors[k]);
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    sxy += (lx[k] - mx) * (ly[k] - my);
    sxx += (lx[k] - mx) * (lx[k] - mx);
  }
  if (sxx == 0.0) throw std::invalid_argument("rate_slope: resolutions coincide");
  return sxy / sxx;
}

double correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("correlation: need two paired samples");
  }
  const double count = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= count;
  my /= count;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace sheetqv
