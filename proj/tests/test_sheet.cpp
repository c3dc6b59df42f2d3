#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sheetqv/sheet.hpp"
#include "sheetqv/stats.hpp"
#include "test_support.hpp"

namespace sheetqv {
namespace {

using testing::mean_se;

SeedSpec seed_of(std::uint64_t k, SheetRole role = SheetRole::driving_W) {
  return derive_seed(77, k, role);
}

TEST(GenerateSheet, SingleCellIsOneNormalDraw) {
  const SeedSpec seed = seed_of(3);
  const BrownianSheet s = generate_sheet(Grid(1), seed);
  NormalSampler z(seed);
  EXPECT_EQ(s(0, 0), 0.0);
  EXPECT_EQ(s(0, 1), 0.0);
  EXPECT_EQ(s(1, 0), 0.0);
  EXPECT_EQ(s(1, 1), z());
}

TEST(GenerateSheet, IncrementsAreScaledDrawsInRowMajorOrder) {
  const SeedSpec seed = seed_of(4);
  const BrownianSheet s = generate_sheet(Grid(5), seed);
  NormalSampler z(seed);
  for (std::size_t i = 1; i <= 5; ++i) {
    for (std::size_t j = 1; j <= 5; ++j) {
      EXPECT_EQ(s.increments()(i, j), 0.2 * z());
      EXPECT_NEAR(rectangle_increment(s.values(), i, j), s.increments()(i, j), 1e-14);
    }
  }
  for (std::size_t k = 0; k <= 5; ++k) {
    EXPECT_EQ(s(0, k), 0.0);
    EXPECT_EQ(s(k, 0), 0.0);
  }
}

TEST(GenerateSheet, BitReproducible) {
  EXPECT_EQ(generate_sheet(Grid(33), seed_of(1)).values(),
            generate_sheet(Grid(33), seed_of(1)).values());
  EXPECT_FALSE(generate_sheet(Grid(33), seed_of(1)).values() ==
               generate_sheet(Grid(33), seed_of(2)).values());
}

TEST(GenerateSheet, CovarianceOracles) {
  const std::size_t reps = 100000;
  std::vector<double> sq(reps), cross(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    const BrownianSheet s = generate_sheet(Grid(4), seed_of(k));
    sq[k] = s(4, 4) * s(4, 4);
    cross[k] = s(2, 4) * s(4, 2);
  }
  EXPECT_NEAR(testing::mean(sq), 1.0, 0.02);
  EXPECT_NEAR(testing::mean(cross), 0.25, 0.02);
}

TEST(GenerateSheet, IndependentRoleIsUncorrelated) {
  const std::size_t reps = 10000;
  std::vector<double> w(reps), b(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    w[k] = generate_sheet(Grid(4), seed_of(k, SheetRole::driving_W))(4, 4);
    b[k] = generate_sheet(Grid(4), seed_of(k, SheetRole::independent_B))(4, 4);
  }
  EXPECT_LE(std::abs(correlation(w, b)), 3.0 / std::sqrt(double(reps)));
}

TEST(GenerateSheet, CornerPassesKs) {
  const std::size_t reps = 10000;
  std::vector<double> x(reps);
  for (std::size_t k = 0; k < reps; ++k) x[k] = generate_sheet(Grid(8), seed_of(k))(8, 8);
  EXPECT_LE(ks_distance(Sample{x, "W(1,1)"}, 1.0), ks_critical_value(reps, 0.01));
}

TEST(Coarsen, IdentityAndSubLattice) {
  const BrownianSheet s = generate_sheet(Grid(4), seed_of(5));
  EXPECT_EQ(coarsen(s, 4).values(), s.values());
  const BrownianSheet c = coarsen(s, 2);
  ASSERT_EQ(c.n(), 2u);
  for (std::size_t i = 0; i <= 2; ++i) {
    for (std::size_t j = 0; j <= 2; ++j) EXPECT_EQ(c(i, j), s(2 * i, 2 * j));
  }
  EXPECT_EQ(c.seed(), s.seed());
  EXPECT_THROW(coarsen(s, 3), std::invalid_argument);
  EXPECT_THROW(coarsen(s, 0), std::invalid_argument);
}

TEST(Coarsen, CoarseIncrementsHaveCellVariance) {
  const std::size_t reps = 10000;
  const std::size_t n = 4;
  std::vector<double> sq(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    const BrownianSheet c = coarsen(generate_sheet(Grid(16), seed_of(k)), n);
    const double d = rectangle_increment(c.values(), 2, 3);
    sq[k] = d * d;
  }
  const auto e = mean_se(sq);
  EXPECT_LE(std::abs(e.mean - 1.0 / 16.0), 3.0 * e.se);
}

TEST(CellIncrements, ZeroSheet) {
  const BrownianSheet zero(Lattice{Grid(3)}, SeedSpec{});
  const CellField cells = cell_increments(zero);
  for (double v : cells.values()) EXPECT_EQ(v, 0.0);
}

TEST(CellIncrements, SecondAndFourthMoments) {
  const std::size_t reps = 10000;
  const std::size_t n = 8;
  const double nd = static_cast<double>(n);
  std::vector<double> sq(reps);
  for (std::size_t k = 0; k < reps; ++k) {
    const double d = cell_increments(generate_sheet(Grid(n), seed_of(k)))(3, 6);
    sq[k] = d * d;
  }
  const auto e = mean_se(sq);
  EXPECT_LE(std::abs(e.mean - 1.0 / (nd * nd)), 3.0 * e.se);
  const Estimate v = moment_with_se(Sample{sq, "dW^2"}, 2);
  EXPECT_LE(std::abs(v.value - 2.0 / std::pow(nd, 4)), 3.0 * v.se);
}

TEST(SheetDump, SingleCellFileLayout) {
  const BrownianSheet s = generate_sheet(Grid(1), SeedSpec{11, 3, SheetRole::independent_B});
  std::ostringstream out;
  write_sheet(out, s);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), kSheetDumpHeaderBytes + 4 * 8);
  EXPECT_EQ(bytes.substr(0, 4), "BSHT");
  std::uint64_t m = 0;
  std::uint32_t role = 0;
  double corner = 0;
  std::memcpy(&m, bytes.data() + 8, 8);
  std::memcpy(&role, bytes.data() + 32, 4);
  std::memcpy(&corner, bytes.data() + 40 + 3 * 8, 8);
  EXPECT_EQ(m, 1u);
  EXPECT_EQ(role, 1u);
  EXPECT_EQ(corner, s(1, 1));
}

TEST(SheetDump, RoundTripIsBitExact) {
  const BrownianSheet s = generate_sheet(Grid(17), seed_of(8, SheetRole::independent_B));
  const auto path = std::filesystem::temp_directory_path() / "sheetqv_roundtrip.bin";
  save_sheet(path, s);
  const BrownianSheet back = load_sheet(path);
  std::filesystem::remove(path);
  EXPECT_EQ(back.values(), s.values());
  EXPECT_EQ(back.seed(), s.seed());
}

TEST(SheetDump, RejectsCorruptInput) {
  const BrownianSheet s = generate_sheet(Grid(2), seed_of(1));
  std::ostringstream out;
  write_sheet(out, s);
  std::string bytes = out.str();

  std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_sheet(truncated), std::runtime_error);

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::istringstream in1(bad_magic);
  EXPECT_THROW(read_sheet(in1), std::runtime_error);

  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::istringstream in2(bad_version);
  EXPECT_THROW(read_sheet(in2), std::runtime_error);

  EXPECT_THROW(load_sheet("/nonexistent/dir/sheet.bin"), std::runtime_error);
}

}  // namespace
}  // namespace sheetqv
