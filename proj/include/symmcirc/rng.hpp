#pragma once

#include <cstdint>
#include <random>

namespace symmcirc {

// splitmix64 finalizer; used both as a seed mixer and to derive per-trajectory
// streams from (master_seed, trajectory_index).
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed derivation contract (stable across releases; golden files depend on it):
//   stream_seed(master, k) = splitmix64(splitmix64(master) ^ (k + 1))
constexpr uint64_t trajectory_seed(uint64_t master_seed, uint64_t trajectory_index) {
  return splitmix64(splitmix64(master_seed) ^ (trajectory_index + 1));
}

// Deterministic RNG wrapper. mt19937_64 output is fully specified by the
// standard; all derived draws below avoid std::*_distribution, whose results
// are implementation-defined.
class Rng {
public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  bool next_bit() { return (next_u64() >> 63) & 1u; }

  // Uniform in [0, n) by rejection; exact.
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) {
        return r % n;
      }
    }
  }

  // Uniform in [0, 1) with 53 bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

private:
  std::mt19937_64 engine_;
};

}  // namespace symmcirc
