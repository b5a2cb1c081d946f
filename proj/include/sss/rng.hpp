#pragma once

// Deterministic counter-based generator (splitmix64). Every randomized
// operation takes an Rng&; independent sub-tasks get child generators via
// split() so the parent stream advances by exactly one step per child,
// independent of how much randomness the child consumes.

#include <cstdint>

namespace sss {

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw from [0, n).
  uint64_t below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform in [0, 1).
  double unit() { return double(next() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  Rng split() { return Rng(next() ^ 0x9fb21c651e98df25ull); }

 private:
  uint64_t state_;
};

}  // namespace sss
