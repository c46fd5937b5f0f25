#include "tdf/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace tdf::kernels::detail {

// vmulq/vaddq rather than vfmaq: matches the scalar round-after-multiply,
// round-after-add sequence exactly (see kernels.hpp).

void weighted_sum_neon(const double* cols, std::size_t n, const double* w,
                       std::size_t k, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t j = 0; j < k; ++j) {
      const float64x2_t wj = vdupq_n_f64(w[j]);
      const float64x2_t c = vld1q_f64(cols + j * n + i);
      acc = vaddq_f64(acc, vmulq_f64(wj, c));
    }
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      acc += w[j] * cols[j * n + i];
    }
    out[i] = acc;
  }
}

void zscore_apply_neon(const double* in, std::size_t n, double mu,
                       double sigma, double* out) {
  const float64x2_t vmu = vdupq_n_f64(mu);
  const float64x2_t vsigma = vdupq_n_f64(sigma);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(in + i);
    vst1q_f64(out + i, vdivq_f64(vsubq_f64(x, vmu), vsigma));
  }
  for (; i < n; ++i) {
    out[i] = (in[i] - mu) / sigma;
  }
}

}  // namespace tdf::kernels::detail

#endif  // aarch64
