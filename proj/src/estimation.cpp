#include "meandev/estimation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include <boost/math/distributions/normal.hpp>

#include "meandev/errors.hpp"
#include "meandev/rng.hpp"

namespace meandev {
namespace {

// Breakpoints of u -> h'(1 - u).
std::vector<double> weight_breaks(const DistortionFunction& h) {
  std::vector<double> out;
  for (double b : h.derivative_breaks()) out.push_back(1.0 - b);
  return out;
}

}  // namespace

double true_deviation(const ParametricModel& model, const DistortionFunction& h, const quadrature::Options& opts) {
  (void)h.derivative_profile();  // rejects distortions without an integrable h'
  auto integrand = [&](UnitPoint p) { return model.quantile(p) * h.left_derivative(p.v); };
  const auto breaks = weight_breaks(h);
  try {
    return quadrature::integrate(integrand, breaks, opts);
  } catch (const NumericError&) {
    throw NumericError("deviation integral diverges: the model's quantile is not integrable against h'");
  }
}

double md_true(const ParametricModel& model, const MDMeasure& m, const quadrature::Options& opts) {
  const double mean = model.mean();
  if (!std::isfinite(mean)) throw NumericError("model has no finite mean");
  const double d = true_deviation(model, m.h(), opts);
  return m.g()(std::max(d, 0.0)) + mean;
}

double sigma_g_squared(const ParametricModel& model, const MDMeasure& m, const quadrature::Options& opts) {
  if (!std::isfinite(model.mean())) throw NumericError("model has no finite mean");
  const double d = true_deviation(model, m.h(), opts);
  const double slope = d > 0.0 ? m.g().left_derivative(d) : m.g().slope_at_zero();
  const DistortionFunction& h = m.h();
  auto weighted = [&](UnitPoint p) {
    return (h.left_derivative(p.v) * slope + 1.0) / model.density_quantile(p);
  };
  const auto breaks = weight_breaks(h);
  auto inner = [&](UnitPoint t) {
    return quadrature::integrate([&](UnitPoint s) { return s.u * weighted(s); }, UnitPoint{0.0, 1.0}, t, breaks,
                                 opts);
  };
  auto outer = [&](UnitPoint t) {
    const double w = weighted(t);
    if (w == 0.0) return 0.0;
    return 2.0 * w * t.v * inner(t);
  };
  try {
    return quadrature::integrate(outer, breaks, opts);
  } catch (const NumericError&) {
    throw NumericError(
        "asymptotic variance integral diverges: the model needs a finite moment of order above 2 "
        "(e.g. lomax tail index > 2)");
  }
}

GaussianLimit gaussian_limit(const ParametricModel& model, const MDMeasure& m, const quadrature::Options& opts) {
  return {md_true(model, m, opts), sigma_g_squared(model, m, opts)};
}

double ks_standard_normal(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw DomainError("KS statistic needs at least two values");
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) return 1.0;
  std::sort(values.begin(), values.end());
  const boost::math::normal_distribution<double> std_normal;
  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = boost::math::cdf(std_normal, (values[i] - mean) / sd);
    const double lo = static_cast<double>(i) / static_cast<double>(n);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
    dmax = std::max({dmax, hi - f, f - lo});
  }
  return dmax;
}

MonteCarloReport monte_carlo(const ParametricModel& model, const MDMeasure& m, std::size_t n,
                             std::size_t replications, std::uint64_t seed, unsigned threads) {
  if (n < 100) throw DomainError("Monte Carlo sample size must be >= 100");
  if (replications < 100) throw DomainError("Monte Carlo needs >= 100 replications");

  MonteCarloReport report;
  report.replications = replications;
  report.sample_size = n;
  report.estimates.assign(replications, 0.0);

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, replications));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::size_t r = next++; r < replications; r = next++) {
        report.estimates[r] = md_eval(m, sample(model, n, derive_seed(seed, r)));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
  }
  if (failure) std::rethrow_exception(failure);

  const auto& est = report.estimates;
  const double reps = static_cast<double>(replications);
  report.mean_estimate = std::accumulate(est.begin(), est.end(), 0.0) / reps;
  double ss = 0.0;
  for (double e : est) ss += (e - report.mean_estimate) * (e - report.mean_estimate);
  report.scaled_variance = static_cast<double>(n) * ss / (reps - 1.0);
  report.normality_statistic = ks_standard_normal(est);
  const GaussianLimit limit = gaussian_limit(model, m);
  report.true_value = limit.center;
  report.target_variance = limit.variance;
  return report;
}

}  // namespace meandev
