#include "sheetqv/sheet.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sheetqv {

BrownianSheet::BrownianSheet(CellField increments, SeedSpec seed)
    : values_(accumulate(increments)),
      increments_(std::move(increments)),
      seed_(seed) {}

BrownianSheet::BrownianSheet(Lattice values, SeedSpec seed)
    : values_(std::move(values)),
      increments_(sheetqv::cell_increments(values_)),
      seed_(seed) {}

BrownianSheet generate_sheet(Grid grid, const SeedSpec& seed) {
  const std::size_t m = grid.n();
  const double scale = grid.spacing();
  NormalSampler normal(seed);
  CellField increments(m);
  for (double& v : increments.values()) v = scale * normal();
  return BrownianSheet(std::move(increments), seed);
}

BrownianSheet coarsen(const BrownianSheet& sheet, std::size_t n) {
  const std::size_t m = sheet.n();
  if (n == 0 || m % n != 0) {
    throw std::invalid_argument("coarsen: n=" + std::to_string(n) +
                                " does not divide m=" + std::to_string(m));
  }
  if (n == m) return sheet;
  const std::size_t r = m / n;
  Lattice coarse{Grid(n)};
  for (std::size_t i = 0; i <= n; ++i) {
    for (std::size_t j = 0; j <= n; ++j) coarse(i, j) = sheet(i * r, j * r);
  }
  return BrownianSheet(std::move(coarse), sheet.seed());
}

CellField cell_increments(const BrownianSheet& sheet) {
  return sheet.increments();
}

namespace {

constexpr char kMagic[4] = {'B', 'S', 'H', 'T'};

template <typename T>
void put_le(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < sizeof(T) / 2; ++k) {
      std::swap(bytes[k], bytes[sizeof(T) - 1 - k]);
    }
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("sheet dump truncated");
  }
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t k = 0; k < sizeof(T) / 2; ++k) {
      std::swap(bytes[k], bytes[sizeof(T) - 1 - k]);
    }
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_sheet(std::ostream& out, const BrownianSheet& sheet) {
  out.write(kMagic, sizeof(kMagic));
  put_le<std::uint32_t>(out, kSheetDumpVersion);
  put_le<std::uint64_t>(out, sheet.n());
  put_le<std::uint64_t>(out, sheet.seed().master_seed);
  put_le<std::uint64_t>(out, sheet.seed().stream_index);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sheet.seed().role));
  put_le<std::uint32_t>(out, 0);
  for (double v : sheet.values().values()) put_le<double>(out, v);
  if (!out) throw std::runtime_error("failed writing sheet dump");
}

BrownianSheet read_sheet(std::istream& in) {
  char magic[4];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
    throw std::runtime_error("not a sheet dump (bad magic)");
  }
  const auto version = get_le<std::uint32_t>(in);
  if (version != kSheetDumpVersion) {
    throw std::runtime_error("unsupported sheet dump version " +
                             std::to_string(version));
  }
  const auto m = get_le<std::uint64_t>(in);
  if (m == 0 || m > (1u << 20)) {
    throw std::runtime_error("sheet dump has invalid resolution");
  }
  SeedSpec seed;
  seed.master_seed = get_le<std::uint64_t>(in);
  seed.stream_index = get_le<std::uint64_t>(in);
  const auto role = get_le<std::uint32_t>(in);
  if (role > 1) throw std::runtime_error("sheet dump has invalid role");
  seed.role = static_cast<SheetRole>(role);
  get_le<std::uint32_t>(in);
  std::vector<double> values((m + 1) * (m + 1));
  for (double& v : values) v = get_le<double>(in);
  return BrownianSheet(Lattice(Grid(m), std::move(values)), seed);
}

void save_sheet(const std::filesystem::path& path, const BrownianSheet& sheet) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_sheet(out, sheet);
}

BrownianSheet load_sheet(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_sheet(in);
}

}  // namespace sheetqv
