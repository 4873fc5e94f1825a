#pragma once

// Counter-derived random streams.
//
// Every Monte-Carlo trial draws from its own stream whose seed is a pure
// function of (master seed, trial index). Results therefore do not depend on
// how trials are split across workers.

#include <cmath>
#include <cstdint>

namespace subgauss {

constexpr std::uint64_t kDefaultSeed = 20211104ULL;

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seed of substream `index` under `master`.
constexpr std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) noexcept {
  std::uint64_t s = master;
  const std::uint64_t a = splitmix64_next(s);
  std::uint64_t t = a ^ (index + 1) * 0xD1B54A32D192ED03ULL;
  splitmix64_next(t);
  return splitmix64_next(t);
}

/// xoshiro256** with SplitMix64 seeding.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = kDefaultSeed) noexcept {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64_next(s);
  }

  static Rng substream(std::uint64_t master, std::uint64_t index) noexcept {
    return Rng(substream_seed(master, index));
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_low() noexcept {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), Lemire's multiply-shift (bias < 2^-64 n).
  std::uint64_t index(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  double sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

  /// Standard normal via the Marsaglia polar method.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace subgauss
