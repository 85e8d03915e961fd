#pragma once

#include <cstdint>
#include <string_view>

namespace hjhomog {

/// Deterministic, splittable random stream. Streams are keyed by
/// (seed, purpose tag, optional integer subkeys) so independent consumers
/// never share a sequence and results do not depend on call order or
/// platform. Generator state is xoshiro256++, seeded through splitmix64.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::string_view purpose,
            std::uint64_t k1 = 0, std::uint64_t k2 = 0);

  std::uint64_t next_u64();

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi);

  /// Poisson sample by inversion of exponential gaps. Intended for small
  /// means (per-cell point counts); throws for mean > 256.
  int poisson(double mean);

private:
  std::uint64_t s_[4];
};

}  // namespace hjhomog
