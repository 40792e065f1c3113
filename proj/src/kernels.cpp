#include "twobody/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace twobody::kernels {

namespace {

Level detect_level() {
  if (const char* env = std::getenv("TWOBODY_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Level::scalar;
    if (std::strcmp(env, "avx2") == 0) return Level::avx2;
  }
#if TWOBODY_HAVE_AVX2_BUILD
  if (__builtin_cpu_supports("avx2")) return Level::avx2;
#endif
  return Level::scalar;
}

Level g_level = detect_level();

}  // namespace

Level active_level() { return g_level; }
void set_level(Level level) { g_level = level; }

const char* level_name(Level level) {
  return level == Level::avx2 ? "avx2" : "scalar";
}

namespace scalar {
void h_pairs(double* amp, std::size_t dim, int bit) { h_pairs_generic(amp, dim, bit); }
void ry_pairs(double* amp, std::size_t dim, int bit, double c, double s) {
  ry_pairs_generic(amp, dim, bit, c, s);
}
void cnot_swap(double* amp, std::size_t dim, int control_bit, int target_bit) {
  cnot_swap_generic(amp, dim, control_bit, target_bit);
}
void square(const double* amp, double* out, std::size_t dim) {
  square_generic(amp, out, dim);
}
}  // namespace scalar

void h_pairs(double* amp, std::size_t dim, int bit) {
#if TWOBODY_HAVE_AVX2_BUILD
  if (g_level == Level::avx2) return avx2::h_pairs(amp, dim, bit);
#endif
  scalar::h_pairs(amp, dim, bit);
}

void ry_pairs(double* amp, std::size_t dim, int bit, double c, double s) {
#if TWOBODY_HAVE_AVX2_BUILD
  if (g_level == Level::avx2) return avx2::ry_pairs(amp, dim, bit, c, s);
#endif
  scalar::ry_pairs(amp, dim, bit, c, s);
}

void cnot_swap(double* amp, std::size_t dim, int control_bit, int target_bit) {
#if TWOBODY_HAVE_AVX2_BUILD
  if (g_level == Level::avx2) return avx2::cnot_swap(amp, dim, control_bit, target_bit);
#endif
  scalar::cnot_swap(amp, dim, control_bit, target_bit);
}

void square(const double* amp, double* out, std::size_t dim) {
#if TWOBODY_HAVE_AVX2_BUILD
  if (g_level == Level::avx2) return avx2::square(amp, out, dim);
#endif
  scalar::square(amp, out, dim);
}

}  // namespace twobody::kernels
