#pragma once

#include <cstdint>
#include <limits>

namespace gesim {

/// SplitMix64 (Steele, Lea, Flood 2014). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a parent seed and a stream index.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  SplitMix64 a(parent ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t h = a();
  SplitMix64 b(h + stream * 0xd1b54a32d192ed03ULL);
  return b();
}

/// Uniform double in [0, 1) with 53 random bits.
template <class Gen>
inline double uniform01(Gen& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

template <class Gen>
inline bool bernoulli(Gen& gen, double p) {
  return uniform01(gen) < p;
}

// Stream tags used when deriving per-purpose seeds from one trial seed.
namespace stream {
inline constexpr std::uint64_t kSource = 0x5352434Eull;
inline constexpr std::uint64_t kStates = 0x53544154ull;
inline constexpr std::uint64_t kNoise = 0x4E4F4953ull;
}  // namespace stream

}  // namespace gesim
