#include "tdf/eval.hpp"

#include <algorithm>

namespace tdf {

namespace {

// Linear crossing of the segment (fa, ra) -> (fb, rb) with the diagonal
// far == frr, given fa > ra and fb <= rb. Parametric in the (far, frr)
// plane, so threshold spacing cancels and the result depends only on the
// error counts.
double crossing(double fa, double ra, double fb, double rb) {
  const double da = fa - ra;
  const double db = fb - rb;
  if (da <= 0.0) {
    return fa;  // already at or past the diagonal
  }
  const double s = da / (da - db);
  return fa + s * (fb - fa);
}

void require_nonempty(std::span<const double> genuine,
                      std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw ValidationError(
        "error-rate evaluation needs at least one genuine and one impostor "
        "score");
  }
}

}  // namespace

DetCurve det_curve(std::span<const double> genuine,
                   std::span<const double> impostor) {
  require_nonempty(genuine, impostor);
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> i(impostor.begin(), impostor.end());
  std::sort(g.begin(), g.end());
  std::sort(i.begin(), i.end());

  const double ng = static_cast<double>(g.size());
  const double ni = static_cast<double>(i.size());

  DetCurve curve;
  std::size_t gi = 0;  // #genuine scores strictly below the current threshold
  std::size_t ii = 0;  // #impostor scores strictly below it
  while (gi < g.size() || ii < i.size()) {
    const double v = (gi < g.size() && (ii >= i.size() || g[gi] <= i[ii]))
                         ? g[gi]
                         : i[ii];
    curve.push_back({v, static_cast<double>(i.size() - ii) / ni,
                     static_cast<double>(gi) / ng});
    while (gi < g.size() && g[gi] == v) {
      ++gi;
    }
    while (ii < i.size() && i[ii] == v) {
      ++ii;
    }
  }
  return curve;
}

double eer(const DetCurve& curve) {
  if (curve.empty()) {
    throw ValidationError("cannot take the EER of an empty DET curve");
  }
  // Below the lowest observed threshold everything is accepted, so the
  // sweep implicitly starts at (far 1, frr 0).
  double prev_far = 1.0;
  double prev_frr = 0.0;
  for (const auto& p : curve) {
    if (p.far <= p.frr) {
      return crossing(prev_far, prev_frr, p.far, p.frr);
    }
    prev_far = p.far;
    prev_frr = p.frr;
  }
  // Every observed threshold still accepts too many impostors; interpolate
  // toward the virtual reject-everything endpoint.
  return crossing(prev_far, prev_frr, 0.0, 1.0);
}

double eer(std::span<const double> genuine, std::span<const double> impostor) {
  return eer(det_curve(genuine, impostor));
}

double eer_sorted(std::span<const double> genuine_sorted,
                  std::span<const double> impostor_sorted) {
  require_nonempty(genuine_sorted, impostor_sorted);
  const auto& g = genuine_sorted;
  const auto& i = impostor_sorted;
  const double ng = static_cast<double>(g.size());
  const double ni = static_cast<double>(i.size());

  double prev_far = 1.0;
  double prev_frr = 0.0;
  std::size_t gi = 0;
  std::size_t ii = 0;
  while (gi < g.size() || ii < i.size()) {
    const double v = (gi < g.size() && (ii >= i.size() || g[gi] <= i[ii]))
                         ? g[gi]
                         : i[ii];
    const double far = static_cast<double>(i.size() - ii) / ni;
    const double frr = static_cast<double>(gi) / ng;
    if (far <= frr) {
      return crossing(prev_far, prev_frr, far, frr);
    }
    prev_far = far;
    prev_frr = frr;
    while (gi < g.size() && g[gi] == v) {
      ++gi;
    }
    while (ii < i.size() && i[ii] == v) {
      ++ii;
    }
  }
  return crossing(prev_far, prev_frr, 0.0, 1.0);
}

}  // namespace tdf
