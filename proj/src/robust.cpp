#include "meandev/robust.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meandev/errors.hpp"
#include "meandev/measures.hpp"
#include "meandev/optimize1d.hpp"

namespace meandev {
namespace {

constexpr std::size_t kGridPoints = 200;
constexpr double kTTolerance = 1e-10;

}  // namespace

double worstcase_moment(const RiskWeightFunction& g, const DistortionFunction& h, const MomentUncertainty& u) {
  if (!(u.v > 0.0) || !std::isfinite(u.v)) throw DomainError("dispersion level v must be > 0");
  if (!(u.order >= 1.0)) throw DomainError("moment order must be >= 1");
  if (!std::isfinite(u.m)) throw DomainError("mean m must be finite");
  if (u.order == 2.0) return g(u.v * h_norms(h, 2.0).l2_norm) + u.m;
  const double q = u.order == 1.0 ? std::numeric_limits<double>::infinity() : u.order / (u.order - 1.0);
  return g(u.v * h_norms(h, q).centered_q_norm) + u.m;
}

double worstcase_wasserstein(const RiskWeightFunction& g, const DistortionFunction& h,
                             const WassersteinUncertainty& u) {
  if (u.order != 2.0) {
    throw UnsupportedError(
        "unsupported: worst case over a type-p Wasserstein ball is only available for p = 2; "
        "no explicit inner formula exists otherwise");
  }
  if (!(u.epsilon >= 0.0) || !std::isfinite(u.epsilon)) throw DomainError("Wasserstein radius must be >= 0");
  const double norm = h_norms(h, 2.0).l2_norm;
  const MDValue nominal = md_components(MDMeasure(g, h), u.center);
  if (u.epsilon == 0.0) return nominal.md;

  const double eps = u.epsilon;
  auto objective = [&](double t) {
    const double radial = std::sqrt(std::max(0.0, 1.0 - t * t));
    return g(eps * radial * norm + nominal.deviation) + t * eps + nominal.mean;
  };
  const double step = 2.0 / static_cast<double>(kGridPoints - 1);
  std::size_t best_i = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kGridPoints; ++i) {
    const double t = i + 1 == kGridPoints ? 1.0 : -1.0 + step * static_cast<double>(i);
    const double v = objective(t);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = best_i == 0 ? -1.0 : -1.0 + step * static_cast<double>(best_i - 1);
  const double hi = std::min(1.0, -1.0 + step * static_cast<double>(best_i + 1));
  const auto refined = golden_section_max(objective, lo, hi, kTTolerance);
  return std::max(best, refined.second);
}

}  // namespace meandev
