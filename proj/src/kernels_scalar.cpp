#include "tdf/kernels.hpp"

namespace tdf::kernels::detail {

void weighted_sum_scalar(const double* cols, std::size_t n, const double* w,
                         std::size_t k, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      acc += w[j] * cols[j * n + i];
    }
    out[i] = acc;
  }
}

void zscore_apply_scalar(const double* in, std::size_t n, double mu,
                         double sigma, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = (in[i] - mu) / sigma;
  }
}

}  // namespace tdf::kernels::detail
