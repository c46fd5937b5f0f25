#pragma once

namespace tdf::stats {

/// Standard normal CDF, accurate to machine precision via erfc.
[[nodiscard]] double normal_cdf(double x);

/// Standard normal quantile (inverse CDF) for p in (0, 1).
///
/// Rational initial estimate refined with one Halley step against
/// normal_cdf, giving ~1e-15 relative accuracy across the open interval.
/// Throws ValidationError for p outside (0, 1).
[[nodiscard]] double normal_quantile(double p);

}  // namespace tdf::stats
