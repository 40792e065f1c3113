#include "twobody/kernels.hpp"

#if TWOBODY_HAVE_AVX2_BUILD

#include <immintrin.h>

namespace twobody::kernels::avx2 {

namespace {

inline void swap_run(double* a, double* b, std::size_t len) {
  std::size_t k = 0;
  for (; k + 4 <= len; k += 4) {
    __m256d va = _mm256_loadu_pd(a + k);
    __m256d vb = _mm256_loadu_pd(b + k);
    _mm256_storeu_pd(a + k, vb);
    _mm256_storeu_pd(b + k, va);
  }
  for (; k < len; ++k) {
    double t = a[k];
    a[k] = b[k];
    b[k] = t;
  }
}

}  // namespace

void h_pairs(double* amp, std::size_t dim, int bit) {
  const std::size_t stride = std::size_t{1} << bit;
  if (stride < 4) return scalar::h_pairs(amp, dim, bit);
  const __m256d inv = _mm256_set1_pd(0.70710678118654752440);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    double* lo = amp + base;
    double* hi = amp + base + stride;
    for (std::size_t k = 0; k < stride; k += 4) {
      __m256d x = _mm256_loadu_pd(lo + k);
      __m256d y = _mm256_loadu_pd(hi + k);
      _mm256_storeu_pd(lo + k, _mm256_mul_pd(_mm256_add_pd(x, y), inv));
      _mm256_storeu_pd(hi + k, _mm256_mul_pd(_mm256_sub_pd(x, y), inv));
    }
  }
}

void ry_pairs(double* amp, std::size_t dim, int bit, double c, double s) {
  const std::size_t stride = std::size_t{1} << bit;
  if (stride < 4) return scalar::ry_pairs(amp, dim, bit, c, s);
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    double* lo = amp + base;
    double* hi = amp + base + stride;
    for (std::size_t k = 0; k < stride; k += 4) {
      __m256d x = _mm256_loadu_pd(lo + k);
      __m256d y = _mm256_loadu_pd(hi + k);
      __m256d nx = _mm256_sub_pd(_mm256_mul_pd(vc, x), _mm256_mul_pd(vs, y));
      __m256d ny = _mm256_add_pd(_mm256_mul_pd(vs, x), _mm256_mul_pd(vc, y));
      _mm256_storeu_pd(lo + k, nx);
      _mm256_storeu_pd(hi + k, ny);
    }
  }
}

void cnot_swap(double* amp, std::size_t dim, int control_bit, int target_bit) {
  const std::size_t tstride = std::size_t{1} << target_bit;
  const std::size_t cstride = std::size_t{1} << control_bit;
  const std::size_t cmask = cstride;
  if (control_bit > target_bit) {
    // Control bit lives in the block prefix: whole runs are taken or skipped.
    for (std::size_t base = 0; base < dim; base += 2 * tstride) {
      if ((base & cmask) == 0) continue;
      swap_run(amp + base, amp + base + tstride, tstride);
    }
  } else {
    // Control bit varies inside the run; the qualifying k form sub-runs of
    // length cstride starting at odd multiples of cstride.
    for (std::size_t base = 0; base < dim; base += 2 * tstride) {
      for (std::size_t k0 = cstride; k0 < tstride; k0 += 2 * cstride) {
        swap_run(amp + base + k0, amp + base + k0 + tstride, cstride);
      }
    }
  }
}

void square(const double* amp, double* out, std::size_t dim) {
  std::size_t z = 0;
  for (; z + 4 <= dim; z += 4) {
    __m256d x = _mm256_loadu_pd(amp + z);
    _mm256_storeu_pd(out + z, _mm256_mul_pd(x, x));
  }
  for (; z < dim; ++z) out[z] = amp[z] * amp[z];
}

}  // namespace twobody::kernels::avx2

#endif  // TWOBODY_HAVE_AVX2_BUILD
