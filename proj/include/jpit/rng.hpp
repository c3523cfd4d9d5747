#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jpit/field.hpp"

namespace jpit {

// Seeded generator with platform-independent sampling (no
// std::uniform_int_distribution, whose output is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }
  // Uniform in [lo, hi].
  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(
                    below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool coin() { return (engine_() >> 63) != 0; }

  std::uint64_t field_value(const PrimeField& f) { return below(f.modulus()); }
  std::uint64_t nonzero_field_value(const PrimeField& f) {
    return 1 + below(f.modulus() - 1);
  }
  std::vector<std::uint64_t> field_point(const PrimeField& f, std::size_t n) {
    std::vector<std::uint64_t> v(n);
    for (auto& x : v) x = field_value(f);
    return v;
  }

  // Independent child stream for trial `index`, stable regardless of how
  // many values the parent has produced.
  Rng split(std::uint64_t index) const {
    std::uint64_t z = seed_ + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace jpit
