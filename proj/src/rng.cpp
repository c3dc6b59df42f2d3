#include "sheetqv/rng.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace sheetqv {

std::string_view to_string(SheetRole role) {
  switch (role) {
    case SheetRole::driving_W:
      return "driving_W";
    case SheetRole::independent_B:
      return "independent_B";
  }
  return "unknown";
}

SheetRole sheet_role_from_string(std::string_view name) {
  if (name == "driving_W") return SheetRole::driving_W;
  if (name == "independent_B") return SheetRole::independent_B;
  throw std::invalid_argument("unknown sheet role '" + std::string(name) + "'");
}

std::uint64_t SeedSpec::stream_key() const {
  return (stream_index << 1) | static_cast<std::uint64_t>(role);
}

SeedSpec derive_seed(std::uint64_t master, std::uint64_t replicate,
                     SheetRole role) {
  if (replicate >> 63) {
    throw std::invalid_argument("replicate index must be below 2^63");
  }
  return SeedSpec{master, replicate, role};
}

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(PhiloxCounter& c, const PhiloxKey& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    philox_round(counter, key);
  }
  return counter;
}

PhiloxStream::PhiloxStream(const SeedSpec& seed)
    : key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      stream_key_(seed.stream_key()) {}

void PhiloxStream::refill() {
  const PhiloxCounter counter{static_cast<std::uint32_t>(block_),
                              static_cast<std::uint32_t>(block_ >> 32),
                              static_cast<std::uint32_t>(stream_key_),
                              static_cast<std::uint32_t>(stream_key_ >> 32)};
  buffer_ = philox4x32_10(counter, key_);
  ++block_;
  cursor_ = 0;
}

std::uint64_t PhiloxStream::next_u64() {
  if (cursor_ >= 4) refill();
  const std::uint64_t lo = buffer_[cursor_];
  const std::uint64_t hi = buffer_[cursor_ + 1];
  cursor_ += 2;
  return lo | (hi << 32);
}

double PhiloxStream::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double PhiloxStream::next_open_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

namespace {

// Marsaglia & Tsang (2000), 256 layers.
constexpr double kTailStart = 3.6541528853610088;
constexpr double kLayerArea = 4.92867323399e-3;
constexpr int kLayers = 256;

struct ZigguratTables {
  std::array<double, kLayers + 1> x{};
  std::array<double, kLayers + 1> f{};

  ZigguratTables() {
    const auto density = [](double v) { return std::exp(-0.5 * v * v); };
    x[0] = kLayerArea / density(kTailStart);
    x[1] = kTailStart;
    for (int i = 1; i < kLayers - 1; ++i) {
      x[i + 1] = std::sqrt(-2.0 * std::log(kLayerArea / x[i] + density(x[i])));
    }
    x[kLayers] = 0.0;
    for (int i = 0; i <= kLayers; ++i) f[i] = density(x[i]);
  }
};

const ZigguratTables& tables() {
  static const ZigguratTables t;
  return t;
}

}  // namespace

double NormalSampler::operator()() {
  const ZigguratTables& z = tables();
  for (;;) {
    const std::uint64_t bits = stream_.next_u64();
    const auto layer = static_cast<int>(bits & 0xFFu);
    const bool negative = (bits & 0x100u) != 0;
    const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    const double x = u * z.x[layer];
    if (x < z.x[layer + 1]) [[likely]] {
      // Branchless sign: a random branch here mispredicts half the time.
      return std::bit_cast<double>(std::bit_cast<std::uint64_t>(x) |
                                   ((bits & 0x100u) << 55));
    }
    if (layer == 0) {
      double a = 0.0;
      double b = 0.0;
      do {
        a = -std::log(stream_.next_open_uniform()) / kTailStart;
        b = -std::log(stream_.next_open_uniform());
      } while (b + b < a * a);
      return negative ? -(kTailStart + a) : kTailStart + a;
    }
    const double y =
        z.f[layer] + stream_.next_uniform() * (z.f[layer + 1] - z.f[layer]);
    if (y < std::exp(-0.5 * x * x)) return negative ? -x : x;
  }
}

}  // namespace sheetqv
