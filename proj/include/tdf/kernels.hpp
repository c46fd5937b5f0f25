#pragma once

#include <cstddef>
#include <span>

namespace tdf::kernels {

// Low-level array kernels behind the weight-grid search and batch score
// normalization. Each kernel has a scalar reference implementation and, on
// x86-64/aarch64, a vector variant selected once at startup. All variants
// are required to produce bit-identical outputs: same per-element operation
// order, no FMA, division kept as division.

enum class Backend { scalar, avx2, neon };

/// Backend chosen at startup (best supported on this CPU).
[[nodiscard]] Backend active_backend();

[[nodiscard]] const char* backend_name(Backend b);

/// True if this build and CPU can execute `b`.
[[nodiscard]] bool backend_supported(Backend b);

/// Overrides the active backend (used by equivalence tests).
/// Throws ValidationError if unsupported here.
void set_backend(Backend b);

/// out[i] = sum over j of weights[j] * cols[j*n + i], accumulated in
/// ascending j. `cols` holds k = weights.size() contiguous columns of
/// length n. `out` must not alias `cols`.
void weighted_sum(const double* cols, std::size_t n,
                  std::span<const double> weights, double* out);

/// out[i] = (in[i] - mu) / sigma. In-place (out == in) is allowed.
void zscore_apply(const double* in, std::size_t n, double mu, double sigma,
                  double* out);

namespace detail {

void weighted_sum_scalar(const double* cols, std::size_t n, const double* w,
                         std::size_t k, double* out);
void zscore_apply_scalar(const double* in, std::size_t n, double mu,
                         double sigma, double* out);

#if defined(__x86_64__) || defined(_M_X64)
void weighted_sum_avx2(const double* cols, std::size_t n, const double* w,
                       std::size_t k, double* out);
void zscore_apply_avx2(const double* in, std::size_t n, double mu,
                       double sigma, double* out);
#endif

#if defined(__aarch64__)
void weighted_sum_neon(const double* cols, std::size_t n, const double* w,
                       std::size_t k, double* out);
void zscore_apply_neon(const double* in, std::size_t n, double mu,
                       double sigma, double* out);
#endif

}  // namespace detail

}  // namespace tdf::kernels
