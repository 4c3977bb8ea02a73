// Deterministic counter-based random streams (splitmix64).
//
// Every stochastic operation takes an explicit 64-bit seed and builds its own
// Rng, so identical seeds give identical outcomes on every platform. Sub-seeds
// for parallel trials are derived by hashing (master_seed, stream, index);
// distinct trials therefore never share a stream.
#pragma once

#include <cstdint>

namespace qmclab {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hash-derives an independent sub-seed from (master, stream, index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index) {
  std::uint64_t s = master;
  s ^= 0xd1b54a32d192ed03ULL * (stream + 1);
  splitmix64_next(s);
  s ^= 0x8cb92ba72f3d8dd7ULL * (index + 1);
  splitmix64_next(s);
  return splitmix64_next(s);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() { return splitmix64_next(state_); }

  // Uniform double in [0, 1), 53 bits of mantissa.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the paired value is cached.
  double next_gaussian();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace qmclab
