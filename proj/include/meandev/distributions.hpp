#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "meandev/state_vector.hpp"

namespace meandev {

/// A point of (0,1) carried together with its complement, so that both
/// tails can be resolved to full relative precision: v == 1 - u.
struct UnitPoint {
  double u;
  double v;

  static UnitPoint from_lower(double u) { return {u, 1.0 - u}; }
  static UnitPoint from_upper(double v) { return {1.0 - v, v}; }
};

/// Continuous loss model with positive density on a convex support.
///   normal(mu, sd)       sd > 0
///   lomax(theta)         P(X > x) = (1 + x)^-theta, x >= 0, theta > 0
///   exponential(beta)    P(X > x) = exp(-beta x), beta > 0
class ParametricModel {
 public:
  enum class Kind { Normal, Lomax, Exponential };

  static ParametricModel normal(double mu, double sd);
  static ParametricModel lomax(double theta);
  static ParametricModel exponential(double beta);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  /// First parameter (mu, theta or beta) and second (sd; unused otherwise).
  [[nodiscard]] double param1() const { return p1_; }
  [[nodiscard]] double param2() const { return p2_; }

  /// F^{-1}(u) for u in (0,1).
  [[nodiscard]] double quantile(double u) const;
  [[nodiscard]] double quantile(UnitPoint p) const;
  [[nodiscard]] double cdf(double x) const;
  [[nodiscard]] double density(double x) const;
  /// f(F^{-1}(u)) for u in (0,1).
  [[nodiscard]] double density_quantile(double u) const;
  [[nodiscard]] double density_quantile(UnitPoint p) const;
  /// +inf when the first moment does not exist.
  [[nodiscard]] double mean() const;

 private:
  ParametricModel(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}
  Kind kind_;
  double p1_;
  double p2_;
};

/// n inverse-transform draws from a generator seeded with `seed`.
StateVector sample(const ParametricModel& model, std::size_t n, std::uint64_t seed);

}  // namespace meandev
