#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>
#include <vector>

namespace asbsr {

/// Stream labels. Every random consumer draws from its own stream so that
/// adding a consumer never shifts the numbers another one sees.
namespace stream {
inline constexpr std::uint64_t kJitter = 0x6a69747465720001ULL;
inline constexpr std::uint64_t kJitterDrop = 0x6a69747465720002ULL;
inline constexpr std::uint64_t kPseudorandom = 0x7072616e64000001ULL;
inline constexpr std::uint64_t kMosaic = 0x6d6f736169630001ULL;
inline constexpr std::uint64_t kMonteCarlo = 0x6d63747269616c01ULL;
inline constexpr std::uint64_t kNoise = 0x6e6f697365000001ULL;
inline constexpr std::uint64_t kOcclusion = 0x6f63636c75640001ULL;
inline constexpr std::uint64_t kSpectrumSamples = 0x7370656374720001ULL;
inline constexpr std::uint64_t kSinogramSamples = 0x73696e6f67720001ULL;
inline constexpr std::uint64_t kSynthetic = 0x73796e7468000001ULL;
}  // namespace stream

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seeded generator with platform-independent draws. std::mt19937_64's output
/// sequence is fixed by the standard; the std distributions are not, so the
/// bounded/real/normal draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}
  Rng(std::uint64_t master_seed, std::uint64_t label, std::uint64_t index = 0)
      : engine_(splitmix64(splitmix64(master_seed ^ label) + index)) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi).
  int range(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo))); }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace asbsr
