#include "tdf/kernels.hpp"

#include "tdf/core.hpp"

namespace tdf::kernels {

namespace {

Backend detect_backend() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) {
    return Backend::avx2;
  }
  return Backend::scalar;
#elif defined(__aarch64__)
  return Backend::neon;
#else
  return Backend::scalar;
#endif
}

Backend g_backend = detect_backend();

}  // namespace

Backend active_backend() { return g_backend; }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
    case Backend::neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw ValidationError(std::string("kernel backend not supported here: ") +
                          backend_name(b));
  }
  g_backend = b;
}

void weighted_sum(const double* cols, std::size_t n,
                  std::span<const double> weights, double* out) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      detail::weighted_sum_avx2(cols, n, weights.data(), weights.size(), out);
      return;
#endif
#if defined(__aarch64__)
    case Backend::neon:
      detail::weighted_sum_neon(cols, n, weights.data(), weights.size(), out);
      return;
#endif
    default:
      detail::weighted_sum_scalar(cols, n, weights.data(), weights.size(),
                                  out);
      return;
  }
}

void zscore_apply(const double* in, std::size_t n, double mu, double sigma,
                  double* out) {
  switch (g_backend) {
#if defined(__x86_64__) || defined(_M_X64)
    case Backend::avx2:
      detail::zscore_apply_avx2(in, n, mu, sigma, out);
      return;
#endif
#if defined(__aarch64__)
    case Backend::neon:
      detail::zscore_apply_neon(in, n, mu, sigma, out);
      return;
#endif
    default:
      detail::zscore_apply_scalar(in, n, mu, sigma, out);
      return;
  }
}

}  // namespace tdf::kernels
