#pragma once

#include <cstddef>
#include <cstdint>

namespace twobody::kernels {

// Amplitude-array kernels for the statevector simulator. Every kernel has a
// scalar reference implementation and an AVX2 variant selected at runtime;
// both perform the identical sequence of IEEE mul/add operations per element
// (no FMA contraction), so the two paths produce bit-identical results. The
// equivalence is unit-tested.

enum class Level { scalar, avx2 };

/// Active dispatch level: AVX2 when the CPU supports it, overridable with
/// the environment variable TWOBODY_SIMD=scalar|avx2 (checked once).
Level active_level();
void set_level(Level level);  // test hook
const char* level_name(Level level);

// Dispatched double-precision kernels. `bit` is the bit position of the
// acted-on qubit within the state index (stride = 1 << bit).
void h_pairs(double* amp, std::size_t dim, int bit);
void ry_pairs(double* amp, std::size_t dim, int bit, double c, double s);
void cnot_swap(double* amp, std::size_t dim, int control_bit, int target_bit);
void square(const double* amp, double* out, std::size_t dim);

namespace scalar {
void h_pairs(double* amp, std::size_t dim, int bit);
void ry_pairs(double* amp, std::size_t dim, int bit, double c, double s);
void cnot_swap(double* amp, std::size_t dim, int control_bit, int target_bit);
void square(const double* amp, double* out, std::size_t dim);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define TWOBODY_HAVE_AVX2_BUILD 1
namespace avx2 {
// Callers must check active_level() (or CPU support) first.
void h_pairs(double* amp, std::size_t dim, int bit);
void ry_pairs(double* amp, std::size_t dim, int bit, double c, double s);
void cnot_swap(double* amp, std::size_t dim, int control_bit, int target_bit);
void square(const double* amp, double* out, std::size_t dim);
}  // namespace avx2
#else
#define TWOBODY_HAVE_AVX2_BUILD 0
#endif

// Generic reference loops, also used directly for the float32 state mode.
template <typename T>
void h_pairs_generic(T* amp, std::size_t dim, int bit) {
  const std::size_t stride = std::size_t{1} << bit;
  const T inv_sqrt2 = static_cast<T>(0.70710678118654752440);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t k = 0; k < stride; ++k) {
      T x = amp[base + k];
      T y = amp[base + k + stride];
      amp[base + k] = (x + y) * inv_sqrt2;
      amp[base + k + stride] = (x - y) * inv_sqrt2;
    }
  }
}

template <typename T>
void ry_pairs_generic(T* amp, std::size_t dim, int bit, double c, double s) {
  const std::size_t stride = std::size_t{1} << bit;
  const T tc = static_cast<T>(c);
  const T ts = static_cast<T>(s);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t k = 0; k < stride; ++k) {
      T x = amp[base + k];
      T y = amp[base + k + stride];
      amp[base + k] = tc * x - ts * y;
      amp[base + k + stride] = ts * x + tc * y;
    }
  }
}

template <typename T>
void cnot_swap_generic(T* amp, std::size_t dim, int control_bit, int target_bit) {
  const std::size_t cmask = std::size_t{1} << control_bit;
  const std::size_t tmask = std::size_t{1} << target_bit;
  for (std::size_t z = 0; z < dim; ++z) {
    if ((z & cmask) != 0 && (z & tmask) == 0) {
      T tmp = amp[z];
      amp[z] = amp[z | tmask];
      amp[z | tmask] = tmp;
    }
  }
}

template <typename T>
void square_generic(const T* amp, T* out, std::size_t dim) {
  for (std::size_t z = 0; z < dim; ++z) out[z] = amp[z] * amp[z];
}

}  // namespace twobody::kernels
