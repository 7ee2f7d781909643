#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace hqc {

__extension__ using UInt128 = unsigned __int128;

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// One reproducible random stream per replica: xoshiro256++ whose 256-bit
/// state is expanded by splitmix64 from (seed, stream id). The same pair
/// always yields the same sequence.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream) noexcept : seed_(seed), stream_(stream) {
    std::uint64_t sm = seed;
    const std::uint64_t mixed_seed = splitmix64(sm);
    sm = stream ^ 0xD1B54A32D192ED03ULL;
    std::uint64_t sm2 = mixed_seed ^ splitmix64(sm);
    for (auto& word : s_) word = splitmix64(sm2);
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on (0, 1]; never returns 0.
  double uniform_open0() noexcept {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform on [0, 1).
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double exponential(double rate) noexcept { return -std::log(uniform_open0()) / rate; }

  /// Uniform integer in [0, bound), bound >= 1 (Lemire's multiply-shift with rejection).
  std::uint64_t below(std::uint64_t bound) noexcept {
    auto m = static_cast<UInt128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<UInt128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t s_[4]{};
};

}  // namespace hqc
