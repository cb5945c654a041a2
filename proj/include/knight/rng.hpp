#pragma once

#include <array>
#include <cstdint>

// Counter-based random numbers (Philox 4x32-10, Salmon et al. SC'11).
// Every draw is a pure function of (key, counter), so sample streams can be
// evaluated lazily, in any order, and from any number of worker threads
// without changing a single bit of the output.

namespace knight::rng {

namespace detail {
inline void mulhilo(uint32_t a, uint32_t b, uint32_t& lo, uint32_t& hi) {
  uint64_t p = uint64_t(a) * b;
  lo = uint32_t(p);
  hi = uint32_t(p >> 32);
}
}  // namespace detail

inline std::array<uint32_t, 4> philox4x32(std::array<uint32_t, 4> ctr,
                                          std::array<uint32_t, 2> key) {
  constexpr uint32_t kM0 = 0xD2511F53u, kM1 = 0xCD9E8D57u;
  constexpr uint32_t kW0 = 0x9E3779B9u, kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    uint32_t lo0, hi0, lo1, hi1;
    detail::mulhilo(kM0, ctr[0], lo0, hi0);
    detail::mulhilo(kM1, ctr[2], lo1, hi1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// splitmix64 finalizer; good 64-bit avalanche for hashing.
inline uint64_t mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline uint64_t combine(uint64_t h, uint64_t v) {
  return mix64(h ^ (v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2)));
}

// One uniform draw for (key, sample, slot), strictly inside (0,1) so that
// probability-0 events never fire and probability-1 events always do.
inline double uniform01(uint64_t key, uint64_t sample, uint32_t slot) {
  auto out = philox4x32({slot, uint32_t(sample), uint32_t(sample >> 32), 0x6b6e6774u},
                        {uint32_t(key), uint32_t(key >> 32)});
  return (double(out[0]) + 0.5) * 0x1p-32;
}

// Sequential splitmix64 stream for non-counter uses (search restarts,
// synthetic data). Not used for live-edge coins.
struct SplitMix {
  uint64_t state;
  explicit SplitMix(uint64_t seed) : state(seed) {}

  uint64_t next() {
    state += 0x9E3779B97F4A7C15ull;
    uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  double unif() { return (double(next() >> 11) + 0.5) * 0x1p-53; }

  // uniform integer in [lo, hi], inclusive
  long long range(long long lo, long long hi) {
    return lo + (long long)(next() % uint64_t(hi - lo + 1));
  }
};

}  // namespace knight::rng
