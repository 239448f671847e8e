#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace covkit {

/// Seeded generator whose output does not depend on the standard library's
/// distribution implementations. mt19937_64's raw stream is fixed by the
/// standard; everything derived here is hand-rolled on top of it.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound). Rejection sampling, bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent stream for a numbered shard or sub-task.
  Rng split(std::uint64_t stream) const {
    std::uint64_t z = seed_mix(stream);
    return Rng(z);
  }

 private:
  std::uint64_t seed_mix(std::uint64_t stream) const {
    std::mt19937_64 copy = engine_;
    std::uint64_t z = copy() ^ (stream + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace covkit
