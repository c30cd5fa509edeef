#pragma once

// Portable, reproducible random numbers.
//
// Engine: xoshiro256** seeded through splitmix64. Per-trial streams are a
// pure function of (master_seed, stream index), so a batch produces the same
// draws no matter how trials are scheduled across threads. All variate
// generators are implemented here rather than taken from <random>, whose
// distributions are implementation-defined.

#include <array>
#include <cstdint>
#include <string_view>

namespace hyperconn::rng {

/// Identifier written into every stochastic output. Bump on any change that
/// alters a draw sequence.
inline constexpr std::string_view kAlgorithmId = "xoshiro256ss+splitmix64-stream/v1";

constexpr std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Stateless 64-bit mixer (the splitmix64 finaliser).
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t state = x;
  return splitmix64_next(state);
}

class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64_next(sm);
  }

  /// Stream `stream` of the family rooted at `master_seed`.
  static Xoshiro256ss for_stream(std::uint64_t master_seed, std::uint64_t stream) noexcept {
    return Xoshiro256ss(mix64(master_seed ^ mix64(stream + 0x632BE59BD9B4E019ULL)));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> s_{};
};

using Engine = Xoshiro256ss;

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Engine& eng) noexcept { return double(eng() >> 11) * 0x1.0p-53; }

/// Uniform on (0, 1).
inline double uniform_open(Engine& eng) noexcept {
  double u;
  do u = uniform01(eng);
  while (u == 0.0);
  return u;
}

/// Uniform integer in [0, bound), bound > 0 (Lemire's nearly divisionless method).
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(eng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(eng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Standard normal (Marsaglia polar method; no cached second value).
double normal(Engine& eng) noexcept;

/// Gamma(shape, 1), shape > 0 (Marsaglia-Tsang).
double gamma(Engine& eng, double shape);

/// Beta(a, b) via two gammas.
double beta(Engine& eng, double a, double b);

/// Poisson(mean): inversion below mean 10, PTRS (Hormann) above.
std::uint64_t poisson(Engine& eng, double mean);

/// Binomial(trials, p) for trials up to 2^63: recursive order-statistic
/// splitting (Knuth, TAOCP 3.4.1) down to an inversion base case.
std::uint64_t binomial(Engine& eng, std::uint64_t trials, double p);

}  // namespace hyperconn::rng
