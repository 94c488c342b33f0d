#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace meandev {

/// A random loss on n equiprobable states. Values are finite and n >= 1.
class StateVector {
 public:
  explicit StateVector(std::vector<double> values);

  static StateVector constant(std::size_t n, double c);

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] double mean() const;

  /// Pointwise sum on the common state space; lengths must match.
  [[nodiscard]] StateVector operator+(const StateVector& other) const;
  [[nodiscard]] StateVector shifted(double c) const;
  [[nodiscard]] StateVector scaled(double lambda) const;
  /// lambda * x + (1 - lambda) * y, pointwise.
  [[nodiscard]] static StateVector mixture(const StateVector& x, const StateVector& y, double lambda);

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::vector<double> values_;
};

/// Sorted copy of a StateVector with suffix sums for O(1) tail integrals.
/// Quantiles use the left-continuous inverse: F^{-1}(u) = x_(ceil(n u)).
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(const StateVector& x);

  [[nodiscard]] std::size_t size() const { return sorted_.size(); }
  [[nodiscard]] std::span<const double> order_statistics() const { return sorted_; }
  [[nodiscard]] double min() const { return sorted_.front(); }
  [[nodiscard]] double max() const { return sorted_.back(); }
  [[nodiscard]] double mean() const;

  /// Left quantile for u in (0,1].
  [[nodiscard]] double quantile(double u) const;

  /// Exact integral of the staircase quantile function over (alpha, 1], alpha in [0,1].
  [[nodiscard]] double upper_tail_integral(double alpha) const;

 private:
  std::vector<double> sorted_;
  std::vector<double> suffix_;  // suffix_[k] = sum of sorted_[k..n-1]
};

/// Smallest k in {0..n} with k/n >= u. Products n*u within 1e-9 (relative)
/// of an integer snap to it, so that e.g. n=10, u=0.7 gives 7 rather than 8.
std::size_t ceil_index(std::size_t n, double u);

/// Single-column CSV with header "value".
StateVector read_state_vector_csv(std::istream& in);
void write_state_vector_csv(std::ostream& out, const StateVector& x);

}  // namespace meandev
