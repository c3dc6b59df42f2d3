#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace sheetqv {

/// Which sheet a stream drives: the observed W or the independent B used to
/// build the limit process on the product extension.
enum class SheetRole : std::uint32_t { driving_W = 0, independent_B = 1 };

std::string_view to_string(SheetRole role);
SheetRole sheet_role_from_string(std::string_view name);

/// (master_seed, stream_index, role) fully determines a random stream.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
  SheetRole role = SheetRole::driving_W;

  /// Upper 64 counter bits of the stream: stream_index * 2 + role. Distinct
  /// for distinct (stream_index, role) as long as stream_index < 2^63.
  std::uint64_t stream_key() const;

  bool operator==(const SeedSpec&) const = default;
};

/// Seed of replicate `replicate` for the given role. Injective in
/// (replicate, role) for a fixed master seed.
SeedSpec derive_seed(std::uint64_t master, std::uint64_t replicate,
                     SheetRole role);

/// Philox4x32-10 block function (Salmon et al., SC'11).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

/// Sequential view of one counter-based stream. The master seed is the key,
/// the stream key occupies the high counter words and the low words count
/// 128-bit blocks.
class PhiloxStream {
 public:
  explicit PhiloxStream(const SeedSpec& seed);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform();
  /// Uniform on (0, 1], safe for log().
  double next_open_uniform();

 private:
  void refill();

  PhiloxKey key_;
  std::uint64_t stream_key_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int cursor_ = 4;
};

/// Standard normal variates by a 256-layer ziggurat. Tables are fixed at
/// first use, so a given stream yields the same variates on every run.
class NormalSampler {
 public:
  explicit NormalSampler(const SeedSpec& seed) : stream_(seed) {}

  double operator()();

 private:
  PhiloxStream stream_;
};

}  // namespace sheetqv
