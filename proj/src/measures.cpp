#include "meandev/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "meandev/errors.hpp"
#include "meandev/optimize1d.hpp"

namespace meandev {
namespace {

void require_open_level(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("probability level must lie in (0,1)");
}

}  // namespace

double var_alpha(const StateVector& x, double alpha) {
  require_open_level(alpha);
  return EmpiricalDistribution(x).quantile(alpha);
}

double es_alpha(const EmpiricalDistribution& x, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("ES level must lie in [0,1)");
  if (alpha == 0.0) return x.mean();
  return x.upper_tail_integral(alpha) / (1.0 - alpha);
}

double es_alpha(const StateVector& x, double alpha) { return es_alpha(EmpiricalDistribution(x), alpha); }

double ru_objective(const StateVector& x, double alpha, double t) {
  require_open_level(alpha);
  double excess = 0.0;
  for (double v : x.values()) excess += std::max(v - t, 0.0);
  return t + excess / (static_cast<double>(x.size()) * (1.0 - alpha));
}

RuResult es_alpha_ru(const StateVector& x, double alpha) {
  require_open_level(alpha);
  const EmpiricalDistribution emp(x);
  const auto xs = emp.order_statistics();
  const std::size_t n = xs.size();
  const double scale = 1.0 / (static_cast<double>(n) * (1.0 - alpha));
  // Objective at breakpoint x_(k): x_(k) + scale * sum_{j>k} (x_(j) - x_(k)).
  double best = std::numeric_limits<double>::infinity();
  double suffix = 0.0;
  for (std::size_t k = n; k-- > 0;) {
    const double above = static_cast<double>(n - 1 - k);
    best = std::min(best, xs[k] + scale * (suffix - above * xs[k]));
    suffix += xs[k];
  }
  return {best, emp.quantile(alpha)};
}

double expectile(const StateVector& x, double alpha) {
  require_open_level(alpha);
  const auto vals = x.values();
  auto excess = [&](double t) {
    double up = 0.0;
    double down = 0.0;
    for (double v : vals) {
      if (v > t) up += v - t;
      else down += t - v;
    }
    return alpha * up - (1.0 - alpha) * down;
  };
  double lo = *std::min_element(vals.begin(), vals.end());
  double hi = *std::max_element(vals.begin(), vals.end());
  if (lo == hi) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (excess(mid) > 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

MDMeasure::MDMeasure(RiskWeightFunction g, DistortionFunction h)
    : g_(std::move(g)),
      h_(std::move(h)),
      classification_(classify_g(g_)),
      range_normalized_(is_range_normalized(h_)) {}

MDMeasure MDMeasure::monetary_certified(RiskWeightFunction g, DistortionFunction h) {
  MDMeasure m(std::move(g), std::move(h));
  if (!m.range_normalized_) {
    throw PreconditionError("monetary certification needs a range-normalized distortion (h'(1) = -1)");
  }
  return m;
}

MDValue md_components(const MDMeasure& m, const StateVector& x) {
  const EmpiricalDistribution emp(x);
  const double d = choquet_deviation(m.h(), emp);
  const double mean = emp.mean();
  return {m.g()(d) + mean, d, mean};
}

double md_eval(const MDMeasure& m, const StateVector& x) { return md_components(m, x).md; }

double adjusted_es_value(const RiskWeightFunction& g, double alpha, const StateVector& x, std::size_t grid_size) {
  require_open_level(alpha);
  const GClassification cls = classify_g(g);
  if (!cls.is_convex || std::abs(cls.asymptotic_slope - 1.0) > 1e-12) {
    throw PreconditionError("adjusted Expected Shortfall form needs a convex g with asymptotic slope 1");
  }
  if (grid_size < 3) throw DomainError("gamma grid needs at least 3 points");
  const EmpiricalDistribution emp(x);
  const double ratio = (1.0 - alpha) / alpha;
  auto objective = [&](double gamma) {
    const double f = conjugate(g, ratio * gamma / (1.0 - gamma));
    if (std::isinf(f)) return -std::numeric_limits<double>::infinity();
    return es_alpha(emp, gamma) - f;
  };
  const double step = alpha / static_cast<double>(grid_size - 1);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < grid_size; ++i) {
    const double gamma = i + 1 == grid_size ? alpha : step * static_cast<double>(i);
    const double v = objective(gamma);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double lo = best_i == 0 ? 0.0 : step * static_cast<double>(best_i - 1);
  const double hi = std::min(alpha, step * static_cast<double>(best_i + 1));
  const auto refined = golden_section_max(objective, lo, hi, 1e-12);
  return std::max(best, refined.second);
}

double adjusted_es_identity_gap(const RiskWeightFunction& g, double alpha, const StateVector& x,
                                std::size_t grid_size) {
  const double sup = adjusted_es_value(g, alpha, x, grid_size);
  const double md = md_eval(MDMeasure(g, DistortionFunction::es_dev(alpha)), x);
  return std::abs(sup - md);
}

namespace axioms {
namespace {

constexpr double kTol = 1e-12;

double slack(double b) { return kTol * std::max(1.0, std::abs(b)); }

bool close_rel(double a, double b) { return std::abs(a - b) <= slack(b); }

}  // namespace

Check cash_additivity(const MDMeasure& m, const StateVector& x, double c) {
  const double lhs = md_eval(m, x.shifted(c));
  const double rhs = md_eval(m, x) + c;
  return {close_rel(lhs, rhs), lhs, rhs};
}

Check monotonicity(const MDMeasure& m, const StateVector& x, const StateVector& y) {
  const double lhs = md_eval(m, x);
  const double rhs = md_eval(m, y);
  return {lhs <= rhs + slack(rhs), lhs, rhs};
}

Check convexity(const MDMeasure& m, const StateVector& x, const StateVector& y, double lambda) {
  const double lhs = md_eval(m, StateVector::mixture(x, y, lambda));
  const double rhs = lambda * md_eval(m, x) + (1.0 - lambda) * md_eval(m, y);
  return {lhs <= rhs + slack(rhs), lhs, rhs};
}

Check star_shaped(const MDMeasure& m, const StateVector& x, double lambda) {
  const double lhs = md_eval(m, x.scaled(lambda));
  const double rhs = lambda * md_eval(m, x);
  return {lhs <= rhs + slack(rhs), lhs, rhs};
}

Check positive_homogeneity(const MDMeasure& m, const StateVector& x, double lambda) {
  const double lhs = md_eval(m, x.scaled(lambda));
  const double rhs = lambda * md_eval(m, x);
  return {close_rel(lhs, rhs), lhs, rhs};
}

StateVector mean_preserving_spread(const StateVector& x, std::size_t index, double delta) {
  if (index >= x.size()) throw DomainError("spread index out of range");
  std::vector<double> out;
  out.reserve(2 * x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i == index) {
      out.push_back(x[i] - delta);
      out.push_back(x[i] + delta);
    } else {
      out.push_back(x[i]);
      out.push_back(x[i]);
    }
  }
  return StateVector(std::move(out));
}

Check spread_consistency(const MDMeasure& m, const StateVector& x, std::size_t index, double delta) {
  const double lhs = md_eval(m, x);
  const double rhs = md_eval(m, mean_preserving_spread(x, index, delta));
  return {lhs <= rhs + slack(rhs), lhs, rhs};
}

}  // namespace axioms

}  // namespace meandev
