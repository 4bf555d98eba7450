#pragma once

#include <cstdint>

namespace maxjsr {

/// Selects the OpenMP kernel or its serial reference.  Both produce
/// bitwise-identical results; the serial path exists for testing and
/// benchmarking.
enum class Execution { serial, parallel };

/// Derives an independent per-sample seed so randomized loops give the same
/// answer regardless of thread schedule (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace maxjsr
