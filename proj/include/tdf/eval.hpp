#pragma once

#include <span>
#include <vector>

#include "tdf/core.hpp"

namespace tdf {

/// One point of a detection-error trade-off curve.
struct DetPoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of impostor scores >= threshold
  double frr = 0.0;  // fraction of genuine scores < threshold
};

/// Points at every distinct observed score, thresholds strictly increasing;
/// far is non-increasing and frr non-decreasing along the curve.
using DetCurve = std::vector<DetPoint>;

/// Sweeps all distinct observed scores as accept thresholds. Scores are
/// similarities (higher = more genuine); the reject rule is strict
/// `score < threshold`, mirroring the device-lock rule.
/// Throws ValidationError when either list is empty.
[[nodiscard]] DetCurve det_curve(std::span<const double> genuine,
                                 std::span<const double> impostor);

/// Equal error rate: the common value where the far and frr step functions
/// cross, linearly interpolated between the bracketing curve points. When
/// no observed threshold reaches far <= frr, the crossing is interpolated
/// toward the virtual all-reject endpoint (far 0, frr 1).
[[nodiscard]] double eer(const DetCurve& curve);

/// det_curve + eer in one call.
[[nodiscard]] double eer(std::span<const double> genuine,
                         std::span<const double> impostor);

/// Allocation-free EER over pre-sorted (ascending) score lists; exact same
/// result as eer(det_curve(...)). This is the weight-grid-search hot path.
[[nodiscard]] double eer_sorted(std::span<const double> genuine_sorted,
                                std::span<const double> impostor_sorted);

}  // namespace tdf
