#pragma once

#include <cstddef>

#include "meandev/distortion.hpp"
#include "meandev/riskweight.hpp"
#include "meandev/state_vector.hpp"

namespace meandev {

/// Left alpha-quantile: order statistic ceil(n alpha), alpha in (0,1).
double var_alpha(const StateVector& x, double alpha);

/// Expected Shortfall: exact integral of the empirical quantile over
/// (alpha, 1] divided by 1 - alpha; alpha in [0,1). ES_0 is the mean.
double es_alpha(const StateVector& x, double alpha);
double es_alpha(const EmpiricalDistribution& x, double alpha);

/// t + E[(X - t)+] / (1 - alpha).
double ru_objective(const StateVector& x, double alpha, double t);

struct RuResult {
  double value;
  double minimizer;  // the left quantile VaR_alpha
};
/// ES through min_t {t + E[(X - t)+] / (1 - alpha)}, minimized over the
/// breakpoints of the piecewise-linear objective.
RuResult es_alpha_ru(const StateVector& x, double alpha);

/// Root of alpha E[(X - t)+] = (1 - alpha) E[(X - t)-], by bisection.
double expectile(const StateVector& x, double alpha);

/// Mean-deviation measure g(D_h(X)) + E[X].
class MDMeasure {
 public:
  MDMeasure(RiskWeightFunction g, DistortionFunction h);
  /// Requires a range-normalized h, under which the measure is monotone.
  static MDMeasure monetary_certified(RiskWeightFunction g, DistortionFunction h);

  [[nodiscard]] const RiskWeightFunction& g() const { return g_; }
  [[nodiscard]] const DistortionFunction& h() const { return h_; }
  [[nodiscard]] const GClassification& classification() const { return classification_; }
  [[nodiscard]] bool range_normalized() const { return range_normalized_; }

 private:
  RiskWeightFunction g_;
  DistortionFunction h_;
  GClassification classification_;
  bool range_normalized_;
};

struct MDValue {
  double md;
  double deviation;
  double mean;
};

MDValue md_components(const MDMeasure& m, const StateVector& x);
double md_eval(const MDMeasure& m, const StateVector& x);

/// Distance between md_eval with h = es_dev(alpha) and the adjusted-ES form
/// sup_{gamma in [0, alpha]} {ES_gamma(X) - g*((1 - alpha)/alpha * gamma/(1 - gamma))},
/// the supremum taken on a uniform gamma grid refined by golden section
/// around the best grid point. Requires convex g with asymptotic slope 1.
double adjusted_es_identity_gap(const RiskWeightFunction& g, double alpha, const StateVector& x,
                                std::size_t grid_size);

/// The supremum part of adjusted_es_identity_gap on its own.
double adjusted_es_value(const RiskWeightFunction& g, double alpha, const StateVector& x, std::size_t grid_size);

namespace axioms {

// Predicates behind the property suites. `holds` applies the stated
// tolerance; lhs/rhs are returned for diagnostics.
struct Check {
  bool holds;
  double lhs;
  double rhs;
};

/// md(x + c) == md(x) + c, relative tolerance 1e-12.
Check cash_additivity(const MDMeasure& m, const StateVector& x, double c);
/// md(x) <= md(y) + 1e-12; x <= y pointwise is the caller's precondition.
Check monotonicity(const MDMeasure& m, const StateVector& x, const StateVector& y);
/// md(lambda x + (1-lambda) y) <= lambda md(x) + (1-lambda) md(y) + 1e-12.
Check convexity(const MDMeasure& m, const StateVector& x, const StateVector& y, double lambda);
/// md(lambda x) <= lambda md(x) + 1e-12, lambda in [0,1].
Check star_shaped(const MDMeasure& m, const StateVector& x, double lambda);
/// md(lambda x) == lambda md(x), relative tolerance 1e-12, lambda > 0.
Check positive_homogeneity(const MDMeasure& m, const StateVector& x, double lambda);

/// The same law on 2n equiprobable states with atom `index` split into
/// x[index] - delta and x[index] + delta.
StateVector mean_preserving_spread(const StateVector& x, std::size_t index, double delta);
/// md(x) <= md(spread) + 1e-12.
Check spread_consistency(const MDMeasure& m, const StateVector& x, std::size_t index, double delta);

}  // namespace axioms

}  // namespace meandev
