#pragma once

#include <filesystem>
#include <iosfwd>

#include "sheetqv/grid.hpp"
#include "sheetqv/rng.hpp"

namespace sheetqv {

/// Brownian sheet sampled on a lattice, together with its cell increments.
/// Values vanish on both axes and cell increments are i.i.d. N(0, 1/m^2).
class BrownianSheet {
 public:
  /// Builds the sheet as the double partial sum of `increments`.
  BrownianSheet(CellField increments, SeedSpec seed);
  /// Wraps an existing lattice; increments are recomputed from it.
  BrownianSheet(Lattice values, SeedSpec seed);

  const Grid& grid() const { return values_.grid(); }
  std::size_t n() const { return values_.n(); }
  const Lattice& values() const { return values_; }
  const CellField& increments() const { return increments_; }
  const SeedSpec& seed() const { return seed_; }

  double operator()(std::size_t i, std::size_t j) const { return values_(i, j); }

 private:
  Lattice values_;
  CellField increments_;
  SeedSpec seed_;
};

/// Draws m^2 i.i.d. N(0, 1/m^2) increments in row-major cell order from the
/// stream named by `seed` and accumulates them.
BrownianSheet generate_sheet(Grid grid, const SeedSpec& seed);

/// Restriction to the coarse grid G_n; n must divide the sheet resolution.
BrownianSheet coarsen(const BrownianSheet& sheet, std::size_t n);

/// All cell increments of the sheet.
CellField cell_increments(const BrownianSheet& sheet);

/// Binary lattice dump: 40-byte header then (m+1)^2 little-endian float64
/// values in row-major order.
///
///   offset  size  field
///        0     4  magic "BSHT"
///        4     4  format version (uint32 LE, currently 1)
///        8     8  m (uint64 LE)
///       16     8  master_seed (uint64 LE)
///       24     8  stream_index (uint64 LE)
///       32     4  sheet role (uint32 LE, 0 = driving_W, 1 = independent_B)
///       36     4  reserved, zero
inline constexpr std::size_t kSheetDumpHeaderBytes = 40;
inline constexpr std::uint32_t kSheetDumpVersion = 1;

void write_sheet(std::ostream& out, const BrownianSheet& sheet);
BrownianSheet read_sheet(std::istream& in);
void save_sheet(const std::filesystem::path& path, const BrownianSheet& sheet);
BrownianSheet load_sheet(const std::filesystem::path& path);

}  // namespace sheetqv
