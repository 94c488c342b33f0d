#include "meandev/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>

#include "meandev/errors.hpp"

namespace meandev {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Integral of |y|^q over [y0, y1] divided by (y1 - y0); y0 != y1.
double mean_abs_power(double y0, double y1, double q) {
  auto antideriv = [q](double y) { return std::copysign(std::pow(std::abs(y), q + 1.0), y) / (q + 1.0); };
  return (antideriv(y1) - antideriv(y0)) / (y1 - y0);
}

double powered_norm(const std::vector<DistortionFunction::Piece>& pieces, double q, double c) {
  double total = 0.0;
  for (const auto& p : pieces) {
    const double a = p.start - c;
    const double b = p.end - c;
    total += (a == b) ? p.length * std::pow(std::abs(a), q) : p.length * mean_abs_power(a, b, q);
  }
  return total;
}

double sup_norm(const std::vector<DistortionFunction::Piece>& pieces, double c) {
  double m = 0.0;
  for (const auto& p : pieces) m = std::max({m, std::abs(p.start - c), std::abs(p.end - c)});
  return m;
}

}  // namespace

DistortionFunction DistortionFunction::es_dev(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("es_dev level alpha must lie in (0,1)");
  return {Kind::EsDev, alpha};
}

DistortionFunction DistortionFunction::gini() { return {Kind::Gini, 0.0}; }
DistortionFunction DistortionFunction::mad_half() { return {Kind::MadHalf, 0.0}; }
DistortionFunction DistortionFunction::range() { return {Kind::Range, 0.0}; }

DistortionFunction DistortionFunction::piecewise_linear(std::vector<double> t, std::vector<double> h) {
  if (t.size() < 2 || t.size() != h.size()) {
    throw ParseError("piecewise_linear distortion needs matching arrays t and h with at least 2 knots");
  }
  if (t.front() != 0.0 || t.back() != 1.0) throw ParseError("piecewise_linear distortion knots must span [0,1]");
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!(t[i + 1] > t[i])) throw ParseError("piecewise_linear distortion knots must increase strictly");
  }
  for (double v : h) {
    if (!std::isfinite(v)) throw ParseError("piecewise_linear distortion values must be finite");
  }
  if (std::abs(h.front()) > 1e-12 || std::abs(h.back()) > 1e-12) {
    throw ParseError("piecewise_linear distortion must satisfy h(0) = h(1) = 0");
  }
  double prev_slope = kInf;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double slope = (h[i + 1] - h[i]) / (t[i + 1] - t[i]);
    if (slope > prev_slope + 1e-12) throw ParseError("piecewise_linear distortion must be concave");
    prev_slope = slope;
  }
  h.front() = 0.0;
  h.back() = 0.0;
  DistortionFunction d(Kind::PiecewiseLinear, 0.0);
  d.t_ = std::move(t);
  d.h_ = std::move(h);
  return d;
}

std::string DistortionFunction::name() const {
  switch (kind_) {
    case Kind::EsDev: return "es_dev";
    case Kind::Gini: return "gini";
    case Kind::MadHalf: return "mad_half";
    case Kind::Range: return "range";
    case Kind::PiecewiseLinear: return "piecewise_linear";
  }
  return {};
}

double DistortionFunction::operator()(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("distortion argument must lie in [0,1]");
  switch (kind_) {
    case Kind::EsDev: return std::min(s / (1.0 - alpha_), 1.0) - s;
    case Kind::Gini: return s - s * s;
    case Kind::MadHalf: return std::min(s, 1.0 - s);
    case Kind::Range: return (s > 0.0 && s < 1.0) ? 1.0 : 0.0;
    case Kind::PiecewiseLinear: {
      const auto it = std::upper_bound(t_.begin(), t_.end(), s);
      if (it == t_.end()) return h_.back();
      const std::size_t j = static_cast<std::size_t>(it - t_.begin());
      const double w = (s - t_[j - 1]) / (t_[j] - t_[j - 1]);
      return h_[j - 1] + w * (h_[j] - h_[j - 1]);
    }
  }
  return 0.0;
}

double DistortionFunction::left_derivative(double s) const {
  if (!(s > 0.0 && s <= 1.0)) throw DomainError("left derivative of h needs s in (0,1]");
  switch (kind_) {
    case Kind::EsDev: return (s <= 1.0 - alpha_ ? 1.0 / (1.0 - alpha_) : 0.0) - 1.0;
    case Kind::Gini: return 1.0 - 2.0 * s;
    case Kind::MadHalf: return s <= 0.5 ? 1.0 : -1.0;
    case Kind::Range: return s < 1.0 ? 0.0 : -kInf;
    case Kind::PiecewiseLinear: {
      // Segment (t_{j-1}, t_j] containing s.
      const auto it = std::lower_bound(t_.begin(), t_.end(), s);
      const std::size_t j = static_cast<std::size_t>(it - t_.begin());
      return (h_[j] - h_[j - 1]) / (t_[j] - t_[j - 1]);
    }
  }
  return 0.0;
}

std::vector<double> DistortionFunction::derivative_breaks() const {
  switch (kind_) {
    case Kind::EsDev: return {1.0 - alpha_};
    case Kind::MadHalf: return {0.5};
    case Kind::PiecewiseLinear: return {t_.begin() + 1, t_.end() - 1};
    case Kind::Gini:
    case Kind::Range: return {};
  }
  return {};
}

std::vector<DistortionFunction::Piece> DistortionFunction::derivative_profile() const {
  switch (kind_) {
    case Kind::EsDev: {
      const double hi = alpha_ / (1.0 - alpha_);
      return {{1.0 - alpha_, hi, hi}, {alpha_, -1.0, -1.0}};
    }
    case Kind::Gini: return {{1.0, 1.0, -1.0}};
    case Kind::MadHalf: return {{0.5, 1.0, 1.0}, {0.5, -1.0, -1.0}};
    case Kind::Range: throw DomainError("norm undefined: the range distortion has no integrable derivative");
    case Kind::PiecewiseLinear: {
      std::vector<Piece> out;
      for (std::size_t i = 0; i + 1 < t_.size(); ++i) {
        const double slope = (h_[i + 1] - h_[i]) / (t_[i + 1] - t_[i]);
        out.push_back({t_[i + 1] - t_[i], slope, slope});
      }
      return out;
    }
  }
  return {};
}

double left_derivative_h(const DistortionFunction& h, double s) { return h.left_derivative(s); }

double choquet_deviation(const DistortionFunction& h, const EmpiricalDistribution& x) {
  const auto xs = x.order_statistics();
  const std::size_t n = xs.size();
  const double dn = static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double gap = xs[i] - xs[i - 1];
    if (gap != 0.0) d += h(static_cast<double>(n - i) / dn) * gap;
  }
  return d;
}

double choquet_deviation(const DistortionFunction& h, const StateVector& x) {
  return choquet_deviation(h, EmpiricalDistribution(x));
}

double centered_norm_at(const DistortionFunction& h, double q, double c) {
  if (!(q >= 1.0)) throw DomainError("norm exponent q must be >= 1");
  const auto pieces = h.derivative_profile();
  if (std::isinf(q)) return sup_norm(pieces, c);
  return std::pow(powered_norm(pieces, q, c), 1.0 / q);
}

ChoquetNorms h_norms(const DistortionFunction& h, double q) {
  if (!(q >= 1.0)) throw DomainError("norm exponent q must be >= 1");
  const auto pieces = h.derivative_profile();
  ChoquetNorms out{};
  out.q = q;
  out.l2_norm = std::sqrt(powered_norm(pieces, 2.0, 0.0));

  double lo = kInf;
  double hi = -kInf;
  for (const auto& p : pieces) {
    lo = std::min({lo, p.start, p.end});
    hi = std::max({hi, p.start, p.end});
  }
  if (std::isinf(q)) {
    out.q_norm = sup_norm(pieces, 0.0);
    out.centered_q_norm = 0.5 * (hi - lo);
    return out;
  }
  out.q_norm = std::pow(powered_norm(pieces, q, 0.0), 1.0 / q);
  // x -> ||h' - x||_q^q is convex and minimized inside [min h', max h'].
  auto objective = [&](double c) { return powered_norm(pieces, q, c); };
  const auto [xmin, fmin] =
      boost::math::tools::brent_find_minima(objective, lo, hi, std::numeric_limits<double>::digits);
  (void)xmin;
  out.centered_q_norm = std::min(std::pow(fmin, 1.0 / q), out.q_norm);
  return out;
}

bool is_range_normalized(const DistortionFunction& h) {
  return std::abs(h.left_derivative(1.0) + 1.0) <= 1e-9;
}

}  // namespace meandev
