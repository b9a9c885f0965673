#pragma once

#include <cstdint>

namespace wcw {

// Counter-based deterministic generator (splitmix64). Every randomized
// verdict records the seed it was started from, so runs are reproducible
// bit-for-bit regardless of thread scheduling.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0. Modulo bias is irrelevant for the tiny n used here.
  uint64_t below(uint64_t n) { return next() % n; }

  static uint64_t mix(uint64_t a, uint64_t b) {
    Rng r(a ^ (0x632be59bd9b4e019ULL + b));
    return r.next();
  }

 private:
  uint64_t state_;
};

}  // namespace wcw
