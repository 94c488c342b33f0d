#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "meandev/distributions.hpp"
#include "meandev/measures.hpp"
#include "meandev/quadrature.hpp"

namespace meandev {

/// Center and variance of the Gaussian limit of sqrt(n) (estimate - truth).
struct GaussianLimit {
  double center;
  double variance;
};

/// Population deviation D_h(X) = integral of F^{-1}(u) h'(1 - u) du.
double true_deviation(const ParametricModel& model, const DistortionFunction& h,
                      const quadrature::Options& opts = {});

/// g(D_h(X)) + E[X] for a parametric model.
double md_true(const ParametricModel& model, const MDMeasure& m, const quadrature::Options& opts = {});

/// Asymptotic variance of the empirical estimator:
///   sigma^2 = int int w(s) w(t) (min(s,t) - s t) / (f~(s) f~(t)) ds dt,
///   w(s) = h'(1 - s) g'(D(X)) + 1,
/// with g' the left derivative at the true deviation. The kink of min(s,t)
/// is removed by integrating 2 w(t)(1-t)/f~(t) int_0^t s w(s)/f~(s) ds dt.
/// Throws NumericError when the integral diverges (too heavy a tail).
double sigma_g_squared(const ParametricModel& model, const MDMeasure& m, const quadrature::Options& opts = {});

GaussianLimit gaussian_limit(const ParametricModel& model, const MDMeasure& m, const quadrature::Options& opts = {});

struct MonteCarloReport {
  std::size_t replications = 0;
  std::size_t sample_size = 0;
  std::vector<double> estimates;
  double mean_estimate = 0.0;
  double scaled_variance = 0.0;  // n * sample variance of the estimates
  double true_value = 0.0;
  double target_variance = 0.0;
  /// Kolmogorov-Smirnov distance between the estimates, standardized by their
  /// own mean and standard deviation, and the standard normal law.
  double normality_statistic = 0.0;
};

/// Replication r draws its sample with seed derive_seed(seed, r), so the
/// report does not depend on `threads` (0 = hardware concurrency).
MonteCarloReport monte_carlo(const ParametricModel& model, const MDMeasure& m, std::size_t n,
                             std::size_t replications, std::uint64_t seed, unsigned threads = 0);

/// KS distance of `values` (standardized by sample mean and sd) to N(0,1).
double ks_standard_normal(std::vector<double> values);

}  // namespace meandev
