#include "tdf/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace tdf::kernels::detail {

// Explicit mul-then-add (no FMA) so every lane performs exactly the scalar
// sequence: round after multiply, round after add. This is what makes the
// bitwise-equivalence guarantee hold.

void weighted_sum_avx2(const double* cols, std::size_t n, const double* w,
                       std::size_t k, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < k; ++j) {
      const __m256d wj = _mm256_set1_pd(w[j]);
      const __m256d c = _mm256_loadu_pd(cols + j * n + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(wj, c));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      acc += w[j] * cols[j * n + i];
    }
    out[i] = acc;
  }
}

void zscore_apply_avx2(const double* in, std::size_t n, double mu,
                       double sigma, double* out) {
  const __m256d vmu = _mm256_set1_pd(mu);
  const __m256d vsigma = _mm256_set1_pd(sigma);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(in + i);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_sub_pd(x, vmu), vsigma));
  }
  for (; i < n; ++i) {
    out[i] = (in[i] - mu) / sigma;
  }
}

}  // namespace tdf::kernels::detail

#endif  // x86-64
