#ifndef LAPRMT_RANDOM_HPP
#define LAPRMT_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

namespace laprmt {

/// SplitMix64 finalizer: a bijective avalanche mix of a 64-bit word.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Substream seed of replicate `index` under `master_seed`: the (index+1)-th
/// output of a SplitMix64 generator started at `master_seed`. Distinct
/// indices give distinct seeds because the mix is a bijection.
constexpr std::uint64_t substream_seed(std::uint64_t master_seed,
                                       std::uint64_t index) noexcept {
  return splitmix64_mix(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Seed of block `block` inside a replicate stream. Block 0 reuses the
/// replicate stream itself so a one-block matrix matches the plain sampler.
constexpr std::uint64_t block_seed(std::uint64_t stream_seed,
                                   std::uint64_t block) noexcept {
  return block == 0 ? stream_seed
                    : substream_seed(stream_seed ^ 0xD1B54A32D192ED03ULL, block);
}

/// Identifier of the draw-order contract written to manifests.
inline constexpr std::string_view kDrawOrderContract =
    "mt19937_64/splitmix64-substreams/box-muller/row-major-upper/v1";

/// Per-substream generator. Everything here is bit-exact across conforming
/// toolchains: std::mt19937_64 is fully specified by the standard and the
/// transforms below are written out explicitly.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard Gaussian by Box-Muller. Uniforms are consumed in pairs
  /// (u1, u2); the cosine branch is returned first and the sine branch is
  /// cached for the next call.
  double gaussian();

  /// +1 or -1 from the top bit of one engine word.
  double rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace laprmt

#endif  // LAPRMT_RANDOM_HPP
