#pragma once

#include <string>
#include <vector>

namespace meandev {

/// Risk-weighting function g: increasing, 1-Lipschitz, g(0) = 0, non-constant,
/// applied to the deviation part of a mean-deviation measure.
class RiskWeightFunction {
 public:
  enum class Kind { Linear, ExpShortfall, ParetoShortfall, ExpCap, ParetoCap, PiecewiseLinear };

  /// g(x) = lambda x, lambda in (0,1].
  static RiskWeightFunction linear(double lambda);
  /// g(x) = E[(x - Y)+] with Y ~ Exp(beta): x + (exp(-beta x) - 1) / beta. Convex.
  static RiskWeightFunction exp_shortfall(double beta);
  /// g(x) = E[(x - Y)+] with Y ~ Lomax(theta). Convex.
  static RiskWeightFunction pareto_shortfall(double theta);
  /// g(x) = E[x ^ Y] with Y ~ Exp(beta): (1 - exp(-beta x)) / beta. Concave.
  static RiskWeightFunction exp_cap(double beta);
  /// g(x) = E[x ^ Y] with Y ~ Lomax(theta). Concave.
  static RiskWeightFunction pareto_cap(double theta);
  /// Continuous piecewise-linear g with g(0) = 0: slope slopes[0] on
  /// [0, knots[0]], slopes[i] on [knots[i-1], knots[i]], slopes.back() beyond
  /// the last knot. Knots positive and strictly increasing, slopes in [0,1].
  static RiskWeightFunction piecewise_linear(std::vector<double> knots, std::vector<double> slopes);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double param() const { return param_; }
  [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
  [[nodiscard]] const std::vector<double>& slopes() const { return slopes_; }

  /// g(x) for x >= 0.
  [[nodiscard]] double operator()(double x) const;
  /// Left derivative for x > 0.
  [[nodiscard]] double left_derivative(double x) const;
  /// Right derivative at 0.
  [[nodiscard]] double slope_at_zero() const;
  /// lim g'(x) as x -> inf.
  [[nodiscard]] double asymptotic_slope() const;

 private:
  RiskWeightFunction(Kind kind, double param) : kind_(kind), param_(param) {}
  [[nodiscard]] double eval_unchecked(double x) const;
  Kind kind_;
  double param_ = 0.0;
  std::vector<double> knots_;
  std::vector<double> slopes_;
  std::vector<double> knot_values_;
};

struct GClassification {
  bool is_linear = false;
  bool is_convex = false;
  bool is_star_shaped = false;  // g(lambda x) <= lambda g(x) for lambda in [0,1]
  bool is_concave = false;
  double asymptotic_slope = 0.0;
  double sup_ratio = 0.0;  // sup_{x>0} g(x)/x
};

double g_eval(const RiskWeightFunction& g, double x);
double g_left_derivative(const RiskWeightFunction& g, double x);
GClassification classify_g(const RiskWeightFunction& g);

/// g*(y) = sup_{x>=0} {x y - g(x)}; +inf outside [.., a].
double conjugate(const RiskWeightFunction& g, double y);

/// sup_{x>0} g(x)/x: the multiplier of the smallest coherent measure
/// lambda D + E dominating g(D) + E.
double smallest_coherent_multiplier(const RiskWeightFunction& g);

/// Grid check of g(0) = 0, monotonicity, the 1-Lipschitz bound and
/// non-constancy on `points` equally spaced points of [0, x_max].
struct MembershipReport {
  bool zero_at_origin = true;
  bool increasing = true;
  bool one_lipschitz = true;
  bool non_constant = true;
  [[nodiscard]] bool ok() const { return zero_at_origin && increasing && one_lipschitz && non_constant; }
};
MembershipReport check_membership(const RiskWeightFunction& g, double x_max = 50.0, std::size_t points = 10000);

}  // namespace meandev
