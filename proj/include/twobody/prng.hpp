#pragma once

#include <cstdint>

namespace twobody {

/// SplitMix64 (Steele, Lea & Flood 2014). Fully specified integer arithmetic,
/// so sequences are byte-identical across platforms and compilers; the
/// standard library distributions are not, which is why they are avoided for
/// anything that feeds reproducible artifacts.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

/// Counter-based stream derivation: both the seed and the stream id are run
/// through the SplitMix64 output function independently before combining, so
/// streams for (seed, 0), (seed, 1), ... and for neighbouring seeds are
/// decorrelated. Used for per-chain and per-event RNG streams.
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id);

/// Standard normal via Box-Muller (one value per call, second discarded).
double standard_normal(SplitMix64& rng);

}  // namespace twobody
