#include "meandev/riskweight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meandev/errors.hpp"
#include "meandev/optimize1d.hpp"

namespace meandev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kConjugateBracketCap = 1e6;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string(what) + " must be a finite positive number");
}

// (1 + x)^(1 - theta) - 1 without cancellation.
double pow1p_minus_one(double x, double theta) { return std::expm1((1.0 - theta) * std::log1p(x)); }

}  // namespace

RiskWeightFunction RiskWeightFunction::linear(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw DomainError("linear risk weight needs lambda in (0,1]");
  return {Kind::Linear, lambda};
}

RiskWeightFunction RiskWeightFunction::exp_shortfall(double beta) {
  require_positive(beta, "exp_shortfall beta");
  return {Kind::ExpShortfall, beta};
}

RiskWeightFunction RiskWeightFunction::pareto_shortfall(double theta) {
  require_positive(theta, "pareto_shortfall theta");
  return {Kind::ParetoShortfall, theta};
}

RiskWeightFunction RiskWeightFunction::exp_cap(double beta) {
  require_positive(beta, "exp_cap beta");
  return {Kind::ExpCap, beta};
}

RiskWeightFunction RiskWeightFunction::pareto_cap(double theta) {
  require_positive(theta, "pareto_cap theta");
  return {Kind::ParetoCap, theta};
}

RiskWeightFunction RiskWeightFunction::piecewise_linear(std::vector<double> knots, std::vector<double> slopes) {
  if (slopes.size() != knots.size() + 1) {
    throw ParseError("piecewise_linear risk weight needs exactly one more slope than knots");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0) || !std::isfinite(knots[i])) throw ParseError("piecewise_linear knots must be positive and finite");
    if (i > 0 && !(knots[i] > knots[i - 1])) throw ParseError("piecewise_linear knots must increase strictly");
  }
  bool any_positive = false;
  for (double s : slopes) {
    if (!(s >= 0.0 && s <= 1.0)) throw ParseError("piecewise_linear slopes must lie in [0,1] (1-Lipschitz, increasing)");
    any_positive = any_positive || s > 0.0;
  }
  if (!any_positive) throw ParseError("piecewise_linear risk weight must not be constant");
  RiskWeightFunction g(Kind::PiecewiseLinear, 0.0);
  g.knots_ = std::move(knots);
  g.slopes_ = std::move(slopes);
  g.knot_values_.resize(g.knots_.size());
  double prev_x = 0.0;
  double prev_g = 0.0;
  for (std::size_t i = 0; i < g.knots_.size(); ++i) {
    prev_g += g.slopes_[i] * (g.knots_[i] - prev_x);
    prev_x = g.knots_[i];
    g.knot_values_[i] = prev_g;
  }
  return g;
}

std::string RiskWeightFunction::name() const {
  switch (kind_) {
    case Kind::Linear: return "linear";
    case Kind::ExpShortfall: return "exp_shortfall";
    case Kind::ParetoShortfall: return "pareto_shortfall";
    case Kind::ExpCap: return "exp_cap";
    case Kind::ParetoCap: return "pareto_cap";
    case Kind::PiecewiseLinear: return "piecewise_linear";
  }
  return {};
}

double RiskWeightFunction::eval_unchecked(double x) const {
  const double p = param_;
  switch (kind_) {
    case Kind::Linear: return p * x;
    case Kind::ExpShortfall: return x + std::expm1(-p * x) / p;
    case Kind::ParetoShortfall:
      return p == 1.0 ? x - std::log1p(x) : x + pow1p_minus_one(x, p) / (p - 1.0);
    case Kind::ExpCap: return -std::expm1(-p * x) / p;
    case Kind::ParetoCap: return p == 1.0 ? std::log1p(x) : -pow1p_minus_one(x, p) / (p - 1.0);
    case Kind::PiecewiseLinear: {
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
      const std::size_t j = static_cast<std::size_t>(it - knots_.begin());
      const double x0 = j == 0 ? 0.0 : knots_[j - 1];
      const double g0 = j == 0 ? 0.0 : knot_values_[j - 1];
      return g0 + slopes_[j] * (x - x0);
    }
  }
  return 0.0;
}

double RiskWeightFunction::operator()(double x) const {
  if (!(x >= 0.0)) throw DomainError("risk weight argument must be >= 0");
  if (std::isinf(x)) {
    const double a = asymptotic_slope();
    if (a > 0.0) return kInf;
  }
  return eval_unchecked(x);
}

double RiskWeightFunction::left_derivative(double x) const {
  if (!(x > 0.0)) throw DomainError("left derivative of g needs x > 0");
  const double p = param_;
  switch (kind_) {
    case Kind::Linear: return p;
    case Kind::ExpShortfall: return -std::expm1(-p * x);
    case Kind::ParetoShortfall: return -std::expm1(-p * std::log1p(x));
    case Kind::ExpCap: return std::exp(-p * x);
    case Kind::ParetoCap: return std::exp(-p * std::log1p(x));
    case Kind::PiecewiseLinear: {
      // Segment (knot_{j-1}, knot_j] containing x.
      const auto it = std::lower_bound(knots_.begin(), knots_.end(), x);
      return slopes_[static_cast<std::size_t>(it - knots_.begin())];
    }
  }
  return 0.0;
}

double RiskWeightFunction::slope_at_zero() const {
  switch (kind_) {
    case Kind::Linear: return param_;
    case Kind::ExpShortfall:
    case Kind::ParetoShortfall: return 0.0;
    case Kind::ExpCap:
    case Kind::ParetoCap: return 1.0;
    case Kind::PiecewiseLinear: return slopes_.front();
  }
  return 0.0;
}

double RiskWeightFunction::asymptotic_slope() const {
  switch (kind_) {
    case Kind::Linear: return param_;
    case Kind::ExpShortfall:
    case Kind::ParetoShortfall: return 1.0;
    case Kind::ExpCap:
    case Kind::ParetoCap: return 0.0;
    case Kind::PiecewiseLinear: return slopes_.back();
  }
  return 0.0;
}

double g_eval(const RiskWeightFunction& g, double x) { return g(x); }

double g_left_derivative(const RiskWeightFunction& g, double x) { return g.left_derivative(x); }

GClassification classify_g(const RiskWeightFunction& g) {
  using Kind = RiskWeightFunction::Kind;
  GClassification c;
  c.asymptotic_slope = g.asymptotic_slope();
  switch (g.kind()) {
    case Kind::Linear:
      c.is_linear = c.is_convex = c.is_star_shaped = c.is_concave = true;
      c.sup_ratio = g.param();
      return c;
    case Kind::ExpShortfall:
    case Kind::ParetoShortfall:
      // Strictly convex; g(x)/x increases to the asymptotic slope 1.
      c.is_convex = c.is_star_shaped = true;
      c.sup_ratio = 1.0;
      return c;
    case Kind::ExpCap:
    case Kind::ParetoCap:
      // Strictly concave; g(x)/x decreases from g'(0) = 1, so not star-shaped.
      c.is_concave = true;
      c.sup_ratio = 1.0;
      return c;
    case Kind::PiecewiseLinear: break;
  }
  const auto& s = g.slopes();
  const auto& k = g.knots();
  constexpr double tol = 1e-12;
  c.is_linear = std::all_of(s.begin(), s.end(), [&](double v) { return std::abs(v - s.front()) <= tol; });
  c.is_convex = std::adjacent_find(s.begin(), s.end(), [&](double a, double b) { return b < a - tol; }) == s.end();
  c.is_concave = std::adjacent_find(s.begin(), s.end(), [&](double a, double b) { return b > a + tol; }) == s.end();
  // g(x)/x is constant on the first segment and, on a later segment starting at
  // knot x_j, nondecreasing iff its slope is at least g(x_j)/x_j.
  c.is_star_shaped = true;
  double sup_ratio = std::max(s.front(), s.back());
  for (std::size_t j = 0; j < k.size(); ++j) {
    const double ratio = g(k[j]) / k[j];
    sup_ratio = std::max(sup_ratio, ratio);
    if (s[j + 1] < ratio - tol) c.is_star_shaped = false;
  }
  c.sup_ratio = sup_ratio;
  return c;
}

double conjugate(const RiskWeightFunction& g, double y) {
  using Kind = RiskWeightFunction::Kind;
  if (std::isnan(y)) throw DomainError("conjugate argument is NaN");
  if (y <= 0.0) return 0.0;
  if (y > g.asymptotic_slope()) return kInf;
  auto phi = [&](double x) { return x * y - g(x); };
  switch (g.kind()) {
    case Kind::Linear: return 0.0;
    case Kind::PiecewiseLinear: {
      // Piecewise-linear objective: the supremum sits at 0 or at a knot
      // (the last ray has slope y - a <= 0).
      double best = 0.0;
      for (double x : g.knots()) best = std::max(best, phi(x));
      return best;
    }
    default: break;
  }
  // Smooth families: expand the bracket until y - g'(x) changes sign.
  double hi = 1.0;
  while (y - g.left_derivative(hi) > 0.0) {
    hi *= 2.0;
    if (hi > kConjugateBracketCap) return kInf;
  }
  const auto [xstar, value] = golden_section_max(phi, 0.0, hi, 1e-10 * std::max(1.0, hi));
  (void)xstar;
  return std::max(value, 0.0);
}

double smallest_coherent_multiplier(const RiskWeightFunction& g) { return classify_g(g).sup_ratio; }

MembershipReport check_membership(const RiskWeightFunction& g, double x_max, std::size_t points) {
  MembershipReport r;
  r.zero_at_origin = g(0.0) == 0.0;
  const double step = x_max / static_cast<double>(points - 1);
  double prev = g(0.0);
  bool moved = false;
  for (std::size_t i = 1; i < points; ++i) {
    const double cur = g(step * static_cast<double>(i));
    if (cur < prev - 1e-12) r.increasing = false;
    if (cur - prev > step + 1e-12) r.one_lipschitz = false;
    if (cur != prev) moved = true;
    prev = cur;
  }
  r.non_constant = moved;
  return r;
}

}  // namespace meandev
