#include "twobody/prng.hpp"

#include <cmath>

namespace twobody {

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream_id) {
  SplitMix64 a(seed);
  SplitMix64 b(stream_id ^ 0x6a09e667f3bcc909ull);
  return a.next() ^ (b.next() + 0x9e3779b97f4a7c15ull);
}

double standard_normal(SplitMix64& rng) {
  // u1 in (0,1] keeps the log finite.
  double u1 = 1.0 - rng.uniform01();
  double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

}  // namespace twobody
