#pragma once
// Deterministic 64-bit generator (splitmix-style).  Used wherever a seeded,
// platform-stable stream is needed; std::mt19937 would do, but distribution
// helpers differ across standard libraries and we promise byte-identical
// outputs for a fixed seed.

#include <cstdint>

namespace lmodal {

struct Rng {
  uint64_t state = 0;

  explicit Rng(uint64_t seed = 0) : state(seed) {}

  uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t n) { return n ? next() % n : 0; }

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  bool flip() { return next() & 1; }
};

}  // namespace lmodal
