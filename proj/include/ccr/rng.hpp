#pragma once

#include <cstdint>
#include <limits>

namespace ccr {

/// SplitMix64 (Steele, Lea, Flood 2014). Cheap to seed, which matters when
/// every Monte Carlo trial gets its own stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed for stream (seed, a, b); distinct tuples give unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  SplitMix64 mix(seed);
  std::uint64_t out = mix();
  SplitMix64 mix_a(out ^ (a * 0xD1B54A32D192ED03ull));
  out = mix_a();
  SplitMix64 mix_b(out ^ (b * 0xABC98388FB8FAC03ull));
  return mix_b();
}

/// Uniform integer in [0, bound) by Lemire's multiply-shift rejection method.
inline std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace ccr
