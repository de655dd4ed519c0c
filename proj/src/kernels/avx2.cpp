// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include "symquad/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>
#endif

namespace symquad::kernels {

#if defined(__AVX2__) && defined(__FMA__)

void jacobi_rows_avx2(const JacobiRecurrence<double>& rec, const double* u, const double* s, std::size_t m,
                      double* out) {
  const auto deg = static_cast<std::size_t>(rec.degree);
  const __m256d p0 = _mm256_set1_pd(rec.p0);
  const __m256d ones = _mm256_set1_pd(1.0);
  std::size_t p = 0;
  for (; p + 4 <= m; p += 4) {
    const __m256d up = _mm256_loadu_pd(u + p);
    const __m256d sp = s ? _mm256_loadu_pd(s + p) : ones;
    const __m256d s2 = _mm256_mul_pd(sp, sp);
    __m256d prev = _mm256_setzero_pd();
    __m256d cur = p0;
    _mm256_storeu_pd(out + p, cur);
    for (std::size_t n = 0; n < deg; ++n) {
      // ((u - diag*s) * cur - off*s^2 * prev) * inv_off
      const __m256d lin = _mm256_fnmadd_pd(_mm256_set1_pd(rec.diag[n]), sp, up);
      const __m256d back = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(rec.off[n]), s2), prev);
      const __m256d next = _mm256_mul_pd(_mm256_fmsub_pd(lin, cur, back), _mm256_set1_pd(rec.inv_off[n + 1]));
      prev = cur;
      cur = next;
      _mm256_storeu_pd(out + (n + 1) * m + p, cur);
    }
  }
  if (p < m) {
    // Tail columns go through the reference loop with the row stride kept.
    std::vector<double> tmp((deg + 1) * (m - p));
    jacobi_rows_scalar(rec, u + p, s ? s + p : nullptr, m - p, tmp.data());
    for (std::size_t n = 0; n <= deg; ++n) {
      for (std::size_t q = 0; q < m - p; ++q) out[n * m + p + q] = tmp[n * (m - p) + q];
    }
  }
}

namespace {
inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}
} // namespace

void product_segment_sums_avx2(double scale, const double* f, const double* g, const double* h,
                               std::span<const std::size_t> offsets, double* out) {
  const __m256d ones = _mm256_set1_pd(1.0);
  for (std::size_t j = 0; j + 1 < offsets.size(); ++j) {
    std::size_t p = offsets[j];
    const std::size_t end = offsets[j + 1];
    __m256d acc = _mm256_setzero_pd();
    for (; p + 4 <= end; p += 4) {
      const __m256d gv = g ? _mm256_loadu_pd(g + p) : ones;
      const __m256d hv = h ? _mm256_loadu_pd(h + p) : ones;
      acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(f + p), gv), hv, acc);
    }
    double tail = 0.0;
    for (; p < end; ++p) {
      double v = f[p];
      if (g) v *= g[p];
      if (h) v *= h[p];
      tail += v;
    }
    out[j] = scale * (hsum(acc) + tail);
  }
}

#else

void jacobi_rows_avx2(const JacobiRecurrence<double>& rec, const double* u, const double* s, std::size_t m,
                      double* out) {
  jacobi_rows_scalar(rec, u, s, m, out);
}

void product_segment_sums_avx2(double scale, const double* f, const double* g, const double* h,
                               std::span<const std::size_t> offsets, double* out) {
  product_segment_sums_scalar(scale, f, g, h, offsets, out);
}

#endif

} // namespace symquad::kernels
