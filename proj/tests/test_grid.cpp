#include <gtest/gtest.h>

#include "sheetqv/grid.hpp"
#include "test_support.hpp"

namespace sheetqv {
namespace {

using testing::Gen;

TEST(Grid, RejectsZeroResolution) {
  EXPECT_THROW(Grid(0), std::invalid_argument);
  const Grid g(4);
  EXPECT_EQ(g.points_per_side(), 5u);
  EXPECT_DOUBLE_EQ(g.spacing(), 0.25);
}

TEST(ParamPoint, RejectsOutsideUnitSquare) {
  EXPECT_THROW(ParamPoint(-0.1, 0.5), std::invalid_argument);
  EXPECT_THROW(ParamPoint(0.5, 1.5), std::invalid_argument);
  EXPECT_THROW(ParamPoint(std::nan(""), 0.5), std::invalid_argument);
  EXPECT_TRUE(ParamPoint(0.2, 0.3).precedes(ParamPoint(0.2, 0.9)));
  EXPECT_FALSE(ParamPoint(0.3, 0.3).precedes(ParamPoint(0.2, 0.9)));
}

TEST(FloorIndex, Examples) {
  EXPECT_EQ(floor_index(0.0, 10), 0u);
  EXPECT_EQ(floor_index(1.0, 10), 10u);
  EXPECT_EQ(floor_index(0.37, 8), 2u);
}

TEST(FloorIndex, DecimalInputsSnap) {
  // 0.7 * 10 = 6.999999999999999 in binary arithmetic.
  EXPECT_EQ(floor_index(0.7, 10), 7u);
  EXPECT_EQ(floor_index(0.3, 10), 3u);
  EXPECT_EQ(floor_index(0.29, 10), 2u);
}

TEST(FloorIndex, Errors) {
  EXPECT_THROW(floor_index(0.5, 0), std::invalid_argument);
  EXPECT_THROW(floor_index(-1e-9, 4), std::invalid_argument);
  EXPECT_THROW(floor_index(1.0 + 1e-9, 4), std::invalid_argument);
}

TEST(FloorIndex, ExactOnGridAndMonotone) {
  for (std::size_t n : {1u, 3u, 7u, 10u, 64u, 1000u}) {
    for (std::size_t i = 0; i <= n; ++i) {
      EXPECT_EQ(floor_index(static_cast<double>(i) / static_cast<double>(n), n),
                i);
    }
  }
  Gen gen(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = gen.index(1, 500);
    double a = gen.unit();
    double b = gen.unit();
    if (a > b) std::swap(a, b);
    EXPECT_LE(floor_index(a, n), floor_index(b, n));
  }
}

TEST(MaxNormDist, Examples) {
  EXPECT_EQ(max_norm_dist({0, 0}, {0, 0}), 0.0);
  EXPECT_NEAR(max_norm_dist({0.2, 0.9}, {0.5, 0.8}), 0.3, 1e-15);
  EXPECT_EQ(max_norm_dist({1, 0}, {0, 1}), 1.0);
}

TEST(MaxNormDist, SymmetricAndZeroOnlyOnEqual) {
  Gen gen(12);
  for (int trial = 0; trial < 1000; ++trial) {
    const ParamPoint p = gen.point();
    const ParamPoint q = gen.point();
    EXPECT_EQ(max_norm_dist(p, q), max_norm_dist(q, p));
    EXPECT_EQ(max_norm_dist(p, p), 0.0);
    if (!(p == q)) EXPECT_GT(max_norm_dist(p, q), 0.0);
  }
}

TEST(RectangleIncrement, Examples) {
  const Lattice c = testing::field_from(4, [](double, double) { return 2.5; });
  const Lattice st = testing::field_from(4, [](double s, double t) { return s * t; });
  const Lattice sum = testing::field_from(4, [](double s, double t) { return s + t; });
  for (std::size_t i = 1; i <= 4; ++i) {
    for (std::size_t j = 1; j <= 4; ++j) {
      EXPECT_EQ(rectangle_increment(c, i, j), 0.0);
      EXPECT_NEAR(rectangle_increment(st, i, j), 1.0 / 16.0, 1e-15);
      EXPECT_NEAR(rectangle_increment(sum, i, j), 0.0, 1e-15);
    }
  }
  EXPECT_EQ(rectangle_increment(st, 1, 1), 1.0 / 16.0);
}

TEST(RectangleIncrement, OutOfRange) {
  const Lattice f{Grid(3)};
  EXPECT_THROW(rectangle_increment(f, 0, 1), std::out_of_range);
  EXPECT_THROW(rectangle_increment(f, 1, 4), std::out_of_range);
  EXPECT_THROW(block_increment(f, 2, 0, 1, 3), std::out_of_range);
}

TEST(RectangleIncrement, AdditiveOverSplits) {
  Gen gen(13);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = gen.index(2, 12);
    const Lattice f = gen.lattice(n);
    std::size_t i0 = gen.index(0, n - 1), i1 = gen.index(i0 + 1, n);
    std::size_t j0 = gen.index(0, n - 1), j1 = gen.index(j0 + 1, n);
    const double whole = block_increment(f, i0, j0, i1, j1);
    double cells = 0.0;
    for (std::size_t i = i0 + 1; i <= i1; ++i) {
      for (std::size_t j = j0 + 1; j <= j1; ++j) cells += rectangle_increment(f, i, j);
    }
    EXPECT_NEAR(whole, cells, 1e-11);
    if (i1 - i0 >= 2) {
      const std::size_t cut = gen.index(i0 + 1, i1 - 1);
      EXPECT_NEAR(whole,
                  block_increment(f, i0, j0, cut, j1) +
                      block_increment(f, cut, j0, i1, j1),
                  1e-12);
    }
  }
}

TEST(Accumulate, InvertsCellIncrements) {
  Gen gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = gen.index(1, 20);
    CellField cells(n);
    for (double& v : cells.values()) v = gen.real(-1, 1);
    const Lattice f = accumulate(cells);
    for (std::size_t k = 0; k <= n; ++k) {
      EXPECT_EQ(f(0, k), 0.0);
      EXPECT_EQ(f(k, 0), 0.0);
    }
    const CellField back = cell_increments(f);
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 1; j <= n; ++j) EXPECT_NEAR(back(i, j), cells(i, j), 1e-12);
    }
  }
}

TEST(Lattice, ValueAtUsesFloorConvention) {
  const Lattice st = testing::field_from(4, [](double s, double t) { return s * t; });
  EXPECT_EQ(st.value_at({0.6, 0.99}), st(2, 3));
  EXPECT_EQ(st.value_at({1.0, 1.0}), st(4, 4));
  EXPECT_THROW(Lattice(Grid(2), std::vector<double>(8)), std::invalid_argument);
}

}  // namespace
}  // namespace sheetqv
