#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sheetqv {

double normal_cdf(double x);
/// Standard normal quantile, p in (0,1).
double normal_quantile(double p);

/// Labelled sample of finite reals.
struct Sample {
  std::vector<double> values;
  std::string label;
};

/// Outcome of one statistical gate. Every gate is phrased so that it passes
/// exactly when statistic <= threshold.
struct TestVerdict {
  std::string gate;
  /// Resolution the gate refers to; 0 for campaign-wide gates.
  std::size_t n = 0;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::size_t n_obs = 0;
  std::string description;
};

TestVerdict make_verdict(std::string gate, std::size_t n, double statistic,
                         double threshold, std::size_t n_obs,
                         std::string description);

/// sup |F_n - Phi(./target_sd)| over the sample.
double ks_distance(const Sample& sample, double target_sd);
/// Same against an arbitrary continuous CDF.
double ks_distance(std::span<const double> values,
                   const std::function<double(double)>& cdf);

/// Asymptotic Kolmogorov critical value c_alpha / sqrt(n_obs).
double ks_critical_value(std::size_t n_obs, double alpha);

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// order 1: mean with se = sd / sqrt(n). order 2: unbiased variance with se
/// from the fourth central moment.
Estimate moment_with_se(const Sample& sample, int order);
Estimate mean_with_se(std::span<const double> values);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Fraction of truths inside their paired interval, with binomial se.
Estimate coverage_rate(std::span<const Interval> intervals,
                       std::span<const double> truths);

/// Least-squares slope of log(errors) against log(ns).
double rate_slope(std::span<const double> ns, std::span<const double> errors);

/// Pearson correlation of paired samples.
double correlation(std::span<const double> x, std::span<const double> y);

}  // namespace sheetqv
