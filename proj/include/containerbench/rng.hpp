#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <vector>

#include "containerbench/errors.hpp"
#include "containerbench/rational.hpp"

namespace cbench {

inline constexpr const char* kGeneratorName = "xoshiro256**/splitmix64";

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of trial `index` under `master`: two splitmix64 rounds over
/// (master, index), so every trial is reproducible on its own.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (index * 0xd1b54a32d192ed03ULL);
  return splitmix64(t);
}

/// xoshiro256** seeded through splitmix64. Bounded integers use rejection
/// sampling and probabilities use the top 53 bits, so streams are identical
/// on every platform.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const auto result = rotl(state_[1] * 5, 7) * 9;
    const auto t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw PreconditionError("empty range");
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do x = (*this)();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return unit() < p; }

  /// Exact Bernoulli(num/den) draw.
  bool bernoulli(const Rational& p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    return below(static_cast<std::uint64_t>(p.denominator())) < static_cast<std::uint64_t>(p.numerator());
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::array<std::uint64_t, 4> state_{};
};

/// `count` distinct values from 0..population-1 in draw order (partial
/// Fisher-Yates shuffle).
inline std::vector<int> sample_without_replacement(Rng& rng, std::size_t population, std::size_t count) {
  if (count > population) throw PreconditionError("sample larger than population");
  std::vector<int> pool(population);
  std::iota(pool.begin(), pool.end(), 0);
  for (std::size_t i = 0; i < count; ++i) {
    auto j = i + rng.below(population - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

}  // namespace cbench
