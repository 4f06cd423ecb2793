#pragma once

#include <cstdint>

namespace bcz {

// splitmix64: tiny, fast, and stable across platforms.  Every randomized
// routine takes an explicit 64-bit seed so reports reproduce bit-for-bit.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [a,b)
  double uniform(double a, double b) { return a + (b - a) * next_double(); }

  uint32_t next_below(uint32_t n) {
    return static_cast<uint32_t>(next_u64() % n);
  }

  bool next_bool() { return (next_u64() & 1u) != 0; }

  // Derive an independent stream; used to hand each trial its own seed.
  Rng split() { return Rng(next_u64() ^ 0xd1b54a32d192ed03ULL); }

 private:
  uint64_t state_;
};

}  // namespace bcz
