#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace dagchrom {

/// SplitMix64 finalizer. Used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seedable, splittable generator.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard, and
/// implements its own bounded draws and shuffles so results do not depend on
/// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Child generator for an independent stream. Depends only on (seed, stream),
  /// never on how much of this generator has been consumed.
  Rng split(std::uint64_t stream) const { return Rng(derive(seed_, stream)); }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  template <class RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      auto j = below(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace dagchrom
