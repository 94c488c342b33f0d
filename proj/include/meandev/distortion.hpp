#pragma once

#include <string>
#include <vector>

#include "meandev/state_vector.hpp"

namespace meandev {

/// Concave h on [0,1] with h(0) = h(1) = 0. The induced signed Choquet
/// deviation is D_h(X) = integral of VaR_u(X) h'(1-u) du = integral of h(P(X > x)) dx.
class DistortionFunction {
 public:
  enum class Kind { EsDev, Gini, MadHalf, Range, PiecewiseLinear };

  /// h(s) = min(s / (1 - alpha), 1) - s, giving D_h = ES_alpha - E.
  static DistortionFunction es_dev(double alpha);
  /// h(t) = t - t^2, giving the Gini deviation E|X1 - X2| / 2.
  static DistortionFunction gini();
  /// h(t) = min(t, 1 - t).
  static DistortionFunction mad_half();
  /// h = 1 on (0,1), 0 at the endpoints; D_h is the range. Bounded data only.
  static DistortionFunction range();
  /// Linear interpolation of (t_i, h_i); t must start at 0, end at 1 and
  /// increase strictly, h must vanish at both ends and be concave.
  static DistortionFunction piecewise_linear(std::vector<double> t, std::vector<double> h);

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] std::string name() const;
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] const std::vector<double>& knots_t() const { return t_; }
  [[nodiscard]] const std::vector<double>& knots_h() const { return h_; }

  [[nodiscard]] double operator()(double s) const;
  /// Left derivative at s in (0,1]. -inf for the range distortion at s = 1.
  [[nodiscard]] double left_derivative(double s) const;
  /// Points of (0,1) where h' jumps.
  [[nodiscard]] std::vector<double> derivative_breaks() const;

  /// h' on [0,1] as consecutive linear pieces (each piece: length, value at
  /// its left end, value at its right end). Throws for the range distortion.
  struct Piece {
    double length;
    double start;
    double end;
  };
  [[nodiscard]] std::vector<Piece> derivative_profile() const;

 private:
  DistortionFunction(Kind kind, double alpha) : kind_(kind), alpha_(alpha) {}
  Kind kind_;
  double alpha_ = 0.0;
  std::vector<double> t_;
  std::vector<double> h_;
};

struct ChoquetNorms {
  double q;
  double l2_norm;          // ||h'||_2
  double q_norm;           // ||h'||_q
  double centered_q_norm;  // [h]_q = min over x of ||h' - x||_q
};

double left_derivative_h(const DistortionFunction& h, double s);

/// Exact staircase value on order statistics:
/// sum_{i=1}^{n-1} h((n - i) / n) (x_(i+1) - x_(i)).
double choquet_deviation(const DistortionFunction& h, const StateVector& x);
double choquet_deviation(const DistortionFunction& h, const EmpiricalDistribution& x);

/// Norms of h' for an exponent q in [1, inf]. DomainError for the range distortion.
ChoquetNorms h_norms(const DistortionFunction& h, double q);

/// ||h' - c||_q for a fixed centering constant c.
double centered_norm_at(const DistortionFunction& h, double q, double c);

/// h'(1) == -1 within 1e-9.
bool is_range_normalized(const DistortionFunction& h);

}  // namespace meandev
