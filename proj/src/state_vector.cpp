#include "meandev/state_vector.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "meandev/errors.hpp"

namespace meandev {

StateVector::StateVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("StateVector needs at least one state");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("StateVector values must be finite");
  }
}

StateVector StateVector::constant(std::size_t n, double c) {
  return StateVector(std::vector<double>(n, c));
}

double StateVector::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

StateVector StateVector::operator+(const StateVector& other) const {
  if (other.size() != size()) throw DomainError("StateVector lengths differ");
  std::vector<double> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = values_[i] + other.values_[i];
  return StateVector(std::move(out));
}

StateVector StateVector::shifted(double c) const {
  std::vector<double> out(values_);
  for (double& v : out) v += c;
  return StateVector(std::move(out));
}

StateVector StateVector::scaled(double lambda) const {
  std::vector<double> out(values_);
  for (double& v : out) v *= lambda;
  return StateVector(std::move(out));
}

StateVector StateVector::mixture(const StateVector& x, const StateVector& y, double lambda) {
  if (x.size() != y.size()) throw DomainError("StateVector lengths differ");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = lambda * x[i] + (1.0 - lambda) * y[i];
  return StateVector(std::move(out));
}

std::size_t ceil_index(std::size_t n, double u) {
  const double t = static_cast<double>(n) * u;
  const double r = std::nearbyint(t);
  double k = (std::abs(t - r) <= 1e-9 * std::max(1.0, t)) ? r : std::ceil(t);
  k = std::clamp(k, 0.0, static_cast<double>(n));
  return static_cast<std::size_t>(k);
}

EmpiricalDistribution::EmpiricalDistribution(const StateVector& x)
    : sorted_(x.values().begin(), x.values().end()) {
  std::sort(sorted_.begin(), sorted_.end());
  suffix_.assign(sorted_.size() + 1, 0.0);
  for (std::size_t k = sorted_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + sorted_[k];
}

double EmpiricalDistribution::mean() const {
  return suffix_[0] / static_cast<double>(sorted_.size());
}

double EmpiricalDistribution::quantile(double u) const {
  if (!(u > 0.0 && u <= 1.0)) throw DomainError("empirical quantile level must lie in (0,1]");
  const std::size_t k = std::max<std::size_t>(1, ceil_index(sorted_.size(), u));
  return sorted_[k - 1];
}

double EmpiricalDistribution::upper_tail_integral(double alpha) const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("tail level must lie in [0,1]");
  const std::size_t n = sorted_.size();
  const double dn = static_cast<double>(n);
  const std::size_t k = ceil_index(n, alpha);
  // Atoms k+1..n lie fully inside (alpha, 1]; atom k contributes k/n - alpha.
  double integral = suffix_[k] / dn;
  if (k > 0) {
    const double partial = static_cast<double>(k) / dn - alpha;
    if (partial > 1e-15) integral += partial * sorted_[k - 1];
  }
  return integral;
}

StateVector read_state_vector_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV: expected header \"value\"");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "value") throw ParseError("CSV header must be \"value\", got \"" + line + "\"");
  std::vector<double> values;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &pos);
    } catch (const std::exception&) {
      throw ParseError("CSV row " + std::to_string(row) + ": not a number: \"" + line + "\"");
    }
    if (pos != line.size() || !std::isfinite(v)) {
      throw ParseError("CSV row " + std::to_string(row) + ": not a finite number: \"" + line + "\"");
    }
    values.push_back(v);
  }
  if (values.empty()) throw ParseError("CSV has no values");
  return StateVector(std::move(values));
}

void write_state_vector_csv(std::ostream& out, const StateVector& x) {
  out << "value\n";
  std::ostringstream buf;
  buf.precision(17);
  for (double v : x.values()) buf << v << '\n';
  out << buf.str();
}

}  // namespace meandev
