#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sheetqv/limit.hpp"
#include "sheetqv/variation.hpp"
#include "test_support.hpp"

namespace sheetqv {
namespace {

using testing::Gen;
using testing::mean_se;

const ScalarFunction kOne = [](double) { return 1.0; };
const ScalarFunction kZero = [](double) { return 0.0; };
const ScalarFunction kCos = [](double x) { return std::cos(x); };

BrownianSheet w_sheet(std::size_t m, std::uint64_t k) {
  return generate_sheet(Grid(m), derive_seed(55, k, SheetRole::driving_W));
}
BrownianSheet b_sheet(std::size_t m, std::uint64_t k) {
  return generate_sheet(Grid(m), derive_seed(55, k, SheetRole::independent_B));
}

/// Brute force over all grid point pairs.
double brute_modulus(const Lattice& f, double delta) {
  const std::size_t n = f.n();
  const double nd = static_cast<double>(n);
  double w = 0.0;
  for (std::size_t a = 0; a <= n; ++a)
    for (std::size_t b = 0; b <= n; ++b)
      for (std::size_t c = 0; c <= n; ++c)
        for (std::size_t d = 0; d <= n; ++d) {
          const double dist =
              std::max(std::abs(double(a) - double(c)), std::abs(double(b) - double(d))) / nd;
          if (dist < delta) w = std::max(w, std::abs(f(a, b) - f(c, d)));
        }
  return w;
}

TEST(SimulateLimit, ZeroWeight) {
  const LimitProcess x = simulate_limit(kZero, w_sheet(8, 0), b_sheet(8, 0), "zero");
  for (double v : x.values.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(x.f_name, "zero");
}

TEST(SimulateLimit, UnitWeightIsScaledB) {
  const BrownianSheet b = b_sheet(16, 1);
  const LimitProcess x = simulate_limit(kOne, w_sheet(16, 1), b);
  for (std::size_t i = 0; i <= 16; ++i) {
    for (std::size_t j = 0; j <= 16; ++j) {
      EXPECT_NEAR(x.values(i, j), std::sqrt(2.0) * b(i, j), 1e-13);
    }
  }
  EXPECT_EQ(x.independent_B_seed, b.seed());
}

TEST(SimulateLimit, RejectsDependentOrMismatchedSheets) {
  EXPECT_THROW(simulate_limit(kOne, w_sheet(8, 0), w_sheet(8, 1)), std::invalid_argument);
  EXPECT_THROW(simulate_limit(kOne, w_sheet(8, 0), b_sheet(4, 0)), std::invalid_argument);
}

TEST(SimulateLimit, NonFiniteWeight) {
  EXPECT_THROW(simulate_limit([](double x) { return std::log(x * x); }, w_sheet(4, 0),
                              b_sheet(4, 0)),
               SimulationError);
}

TEST(SimulateLimit, UnitWeightVarianceTwo) {
  const std::size_t reps = 10000;
  std::vector<double> x(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    x[k] = simulate_limit(kOne, w_sheet(4, k), b_sheet(4, k)).values(4, 4);
  }
  const Estimate v = moment_with_se(Sample{x, "X"}, 2);
  EXPECT_LE(std::abs(v.value - 2.0), 3.0 * v.se);
}

TEST(ConditionalCovariance, QuadratureOracle) {
  const std::size_t m = 16;
  const BrownianSheet w = w_sheet(m, 2);
  // Direct sum over the hand-computed intersection (4, 10] x (2, 12].
  double direct = 0.0;
  for (std::size_t k = 5; k <= 10; ++k)
    for (std::size_t l = 3; l <= 12; ++l) direct += std::pow(std::cos(w(k - 1, l - 1)), 2);
  direct *= 2.0 / 256.0;
  EXPECT_NEAR(conditional_covariance(kCos, w, {0, 2, 10, 16}, {4, 0, 16, 12}), direct, 1e-14);
  EXPECT_EQ(conditional_covariance(kCos, w, {0, 0, 4, 4}, {4, 4, 8, 8}), 0.0);
  EXPECT_DOUBLE_EQ(conditional_covariance(kOne, w, {0, 0, 16, 16}, {0, 0, 16, 16}), 2.0);
  EXPECT_THROW(conditional_covariance(kOne, w, {0, 0, 17, 4}, {0, 0, 1, 1}),
               std::out_of_range);
}

TEST(ConditionalCovariance, MatchesMonteCarloOverB) {
  const std::size_t m = 16;
  const BrownianSheet w = w_sheet(m, 3);
  const IndexBlock a{0, 0, 12, 16};
  const IndexBlock b{4, 4, 16, 12};
  const IndexBlock far{12, 0, 16, 4};
  const std::size_t reps = 10000;
  std::vector<double> prod(reps), xa(reps), xf(reps), z(reps);
  const double var_full = conditional_covariance(kCos, w, {0, 0, m, m}, {0, 0, m, m});
  for (std::size_t k = 0; k < reps; ++k) {
    const Lattice x = simulate_limit(kCos, w, b_sheet(m, k)).values;
    xa[k] = block_increment(x, a.i0, a.j0, a.i1, a.j1);
    prod[k] = xa[k] * block_increment(x, b.i0, b.j0, b.i1, b.j1);
    xf[k] = block_increment(x, far.i0, far.j0, far.i1, far.j1);
    z[k] = x(m, m) / std::sqrt(var_full);
  }
  const auto c = mean_se(prod);
  EXPECT_LE(std::abs(c.mean - conditional_covariance(kCos, w, a, b)), 3.0 * c.se);
  // Increments over disjoint blocks are independent given W.
  EXPECT_LE(std::abs(correlation(xa, xf)), 3.0 / std::sqrt(double(reps)));
  EXPECT_LE(ks_distance(Sample{z, "z"}, 1.0), ks_critical_value(reps, 0.01));
}

TEST(Modulus, Examples) {
  const Lattice c = testing::field_from(8, [](double, double) { return 4.0; });
  for (double d : {0.01, 0.3, 1.0, 2.0}) EXPECT_EQ(modulus_of_continuity(c, d), 0.0);

  const Lattice s = testing::field_from(8, [](double s, double) { return s; });
  EXPECT_DOUBLE_EQ(modulus_of_continuity(s, 2.5 / 8), 2.0 / 8);
  EXPECT_EQ(modulus_of_continuity(s, 1.0 / 8), 0.0);
  EXPECT_DOUBLE_EQ(modulus_of_continuity(s, 2.0 / 8), 1.0 / 8);

  Gen gen(41);
  const Lattice r = gen.lattice(6);
  const auto [lo, hi] = std::minmax_element(r.values().begin(), r.values().end());
  EXPECT_EQ(modulus_of_continuity(r, 1.0 + 1e-9), *hi - *lo);
  EXPECT_EQ(modulus_of_continuity(r, 5.0), *hi - *lo);
  EXPECT_THROW(modulus_of_continuity(r, 0.0), std::invalid_argument);
}

TEST(Modulus, AgreesWithBruteForceAndIsMonotone) {
  Gen gen(42);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = gen.index(1, 9);
    const Lattice f = gen.lattice(n);
    double prev = 0.0;
    std::vector<double> deltas = gen.reals(6, 0.001, 1.2);
    deltas.push_back(3.0 / static_cast<double>(n));
    std::sort(deltas.begin(), deltas.end());
    for (double d : deltas) {
      const double w = modulus_of_continuity(f, d);
      EXPECT_EQ(w, brute_modulus(f, d)) << "n=" << n << " delta=" << d;
      EXPECT_GE(w, prev);
      prev = w;
    }
  }
}

TEST(SimpleFlow, Validation) {
  using B = SimpleFlow::Breakpoints;
  EXPECT_THROW(SimpleFlow(B{{0, 0}}, B{{0, 0}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(SimpleFlow(B{{0, 0.1}, {1, 1}}, B{{0, 0}, {1, 1}}), std::invalid_argument);
  EXPECT_THROW(SimpleFlow(B{{0, 0}, {0.5, 0.6}, {1, 0.4}}, B{{0, 0}, {1, 1}}),
               std::invalid_argument);
  EXPECT_THROW(SimpleFlow(B{{0, 0}, {0.5, 0.2}, {0.5, 0.3}, {1, 1}}, B{{0, 0}, {1, 1}}),
               std::invalid_argument);
  EXPECT_THROW(SimpleFlow(B{{0, 0}, {1, 1.5}}, B{{0, 0}, {1, 1}}), std::invalid_argument);
  const SimpleFlow d = SimpleFlow::diagonal();
  EXPECT_THROW(d(1.5), std::invalid_argument);
  EXPECT_EQ(d(0.0), ParamPoint(0, 0));
}

TEST(SimpleFlow, DiagonalEndpointAndStaircase) {
  const BrownianSheet w = w_sheet(8, 4);
  const Lattice x = weighted_qv_process(kCos, w).values;
  EXPECT_EQ(evaluate_along_flow(x, SimpleFlow::diagonal(), {1.0}).front(), x(8, 8));

  // Grows s first to 3/8, then t to 1, then s to 1.
  const SimpleFlow stair({{0, 0}, {0.25, 0.375}, {0.75, 0.375}, {1, 1}},
                         {{0, 0}, {0.25, 0}, {0.75, 1}, {1, 1}});
  const std::vector<double> ts = {0.0, 0.25, 0.5, 0.75, 1.0};
  const std::vector<double> vals = evaluate_along_flow(x, stair, ts);
  EXPECT_EQ(vals[0], x(0, 0));
  EXPECT_EQ(vals[1], x(3, 0));
  EXPECT_EQ(vals[2], x(3, 4));
  EXPECT_EQ(vals[3], x(3, 8));
  EXPECT_EQ(vals[4], x(8, 8));
  EXPECT_THROW(evaluate_along_flow(x, stair, {0.5, 0.25}), std::invalid_argument);
}

TEST(SimpleFlow, OneParameterMartingaleAlongFlows) {
  const std::size_t reps = 10000;
  const SimpleFlow diag = SimpleFlow::diagonal();
  const SimpleFlow bent({{0, 0}, {0.5, 0.75}, {1, 1}}, {{0, 0}, {0.5, 0.25}, {1, 1}});
  std::vector<double> late(reps), past(reps), bent_inc(reps), bent_past(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    const Lattice x = weighted_qv_process(kOne, w_sheet(8, k)).values;
    const auto v = evaluate_along_flow(x, diag, {0.5, 1.0});
    late[k] = v[1] - v[0];
    past[k] = std::tanh(v[0]);
    const auto u = evaluate_along_flow(x, bent, {0.5, 1.0});
    bent_inc[k] = u[1] - u[0];
    bent_past[k] = u[0] > 0.0 ? 1.0 : -1.0;
  }
  const Estimate v = moment_with_se(Sample{late, "inc"}, 2);
  EXPECT_LE(std::abs(v.value - 1.5), 3.0 * v.se);
  const double band = 3.0 / std::sqrt(double(reps));
  EXPECT_LE(std::abs(correlation(late, past)), band);
  EXPECT_LE(std::abs(correlation(bent_inc, bent_past)), band);
}

TEST(PredictableBracket, ConvergesToQuadrature) {
  const std::size_t m = 512;
  const std::vector<std::size_t> ns = {16, 32, 64};
  std::vector<double> err(ns.size(), 0.0);
  for (std::uint64_t k = 0; k < 40; ++k) {
    const BrownianSheet fine = w_sheet(m, k);
    const double target = conditional_covariance(kCos, fine, {0, 0, m, m}, {0, 0, m, m});
    for (std::size_t a = 0; a < ns.size(); ++a) {
      err[a] += std::abs(predictable_bracket(kCos, coarsen(fine, ns[a]), {1, 1}) - target);
    }
  }
  for (std::size_t a = 0; a + 1 < ns.size(); ++a) {
    const double ratio = err[a + 1] / err[a];
    EXPECT_GE(ratio, 0.3);
    EXPECT_LE(ratio, 0.8);
  }
}

TEST(Tightness, Examples) {
  const auto zero = tightness_diagnostic(kZero, {8, 16}, kDefaultTightnessDeltas, 20,
                                         kDefaultTightnessEps, 1);
  EXPECT_EQ(zero.size(), 2 * 4 * 3u);
  for (const auto& row : zero) EXPECT_EQ(row.p_hat, 0.0);

  const auto loose = tightness_diagnostic(kOne, {32}, {1.0 / 32}, 500, {10.0}, 2);
  ASSERT_EQ(loose.size(), 1u);
  EXPECT_LE(loose[0].p_hat, 0.05);
  EXPECT_EQ(loose[0].replicates, 500u);
}

TEST(Tightness, NondecreasingInDelta) {
  const auto rows = tightness_diagnostic(kOne, {16}, kDefaultTightnessDeltas, 200, {0.5, 1.0, 2.0}, 3);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k].eps == rows[k - 1].eps) {
      EXPECT_GE(rows[k].p_hat, rows[k - 1].p_hat);
    }
  }
  std::ostringstream csv;
  write_tightness_csv(csv, {rows.front()});
  EXPECT_EQ(csv.str().substr(0, 19), "n,delta,eps,p_hat,N");
  EXPECT_THROW(tightness_diagnostic(kOne, {}, {0.1}, 5, {1.0}, 1), std::invalid_argument);
}

}  // namespace
}  // namespace sheetqv
