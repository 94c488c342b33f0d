#include "meandev/distributions.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/distributions/normal.hpp>

#include "meandev/errors.hpp"
#include "meandev/rng.hpp"

namespace meandev {
namespace {

const boost::math::normal_distribution<double> kStdNormal{0.0, 1.0};

void check_open_unit(UnitPoint p) {
  if (!(p.u > 0.0 && p.v > 0.0)) {
    throw DomainError("probability level must lie in the open interval (0,1)");
  }
}

}  // namespace

ParametricModel ParametricModel::normal(double mu, double sd) {
  if (!std::isfinite(mu) || !(sd > 0.0) || !std::isfinite(sd)) {
    throw DomainError("normal model needs finite mu and sd > 0");
  }
  return {Kind::Normal, mu, sd};
}

ParametricModel ParametricModel::lomax(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw DomainError("lomax tail index must be > 0");
  return {Kind::Lomax, theta, 0.0};
}

ParametricModel ParametricModel::exponential(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("exponential rate must be > 0");
  return {Kind::Exponential, beta, 0.0};
}

std::string ParametricModel::name() const {
  switch (kind_) {
    case Kind::Normal: return "normal";
    case Kind::Lomax: return "lomax";
    case Kind::Exponential: return "exponential";
  }
  return {};
}

double ParametricModel::quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0,1)");
  return quantile(UnitPoint::from_lower(u));
}

double ParametricModel::quantile(UnitPoint p) const {
  check_open_unit(p);
  switch (kind_) {
    case Kind::Normal: {
      // Resolve whichever tail is closer to keep relative precision.
      const double z = p.u <= 0.5 ? boost::math::quantile(kStdNormal, p.u)
                                  : -boost::math::quantile(kStdNormal, p.v);
      return p1_ + p2_ * z;
    }
    case Kind::Lomax:
      return p.u <= 0.5 ? std::expm1(-std::log1p(-p.u) / p1_) : std::pow(p.v, -1.0 / p1_) - 1.0;
    case Kind::Exponential:
      return p.u <= 0.5 ? -std::log1p(-p.u) / p1_ : -std::log(p.v) / p1_;
  }
  return 0.0;
}

double ParametricModel::cdf(double x) const {
  switch (kind_) {
    case Kind::Normal: return boost::math::cdf(kStdNormal, (x - p1_) / p2_);
    case Kind::Lomax: return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * std::log1p(x));
    case Kind::Exponential: return x <= 0.0 ? 0.0 : -std::expm1(-p1_ * x);
  }
  return 0.0;
}

double ParametricModel::density(double x) const {
  switch (kind_) {
    case Kind::Normal: return boost::math::pdf(kStdNormal, (x - p1_) / p2_) / p2_;
    case Kind::Lomax: return x < 0.0 ? 0.0 : p1_ * std::pow(1.0 + x, -p1_ - 1.0);
    case Kind::Exponential: return x < 0.0 ? 0.0 : p1_ * std::exp(-p1_ * x);
  }
  return 0.0;
}

double ParametricModel::density_quantile(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("density-quantile level must lie in (0,1)");
  return density_quantile(UnitPoint::from_lower(u));
}

double ParametricModel::density_quantile(UnitPoint p) const {
  check_open_unit(p);
  switch (kind_) {
    case Kind::Normal: {
      const double z = p.u <= 0.5 ? boost::math::quantile(kStdNormal, p.u)
                                  : boost::math::quantile(kStdNormal, p.v);
      return boost::math::pdf(kStdNormal, z) / p2_;
    }
    case Kind::Lomax: return p1_ * std::pow(p.v, 1.0 + 1.0 / p1_);
    case Kind::Exponential: return p1_ * p.v;
  }
  return 0.0;
}

double ParametricModel::mean() const {
  switch (kind_) {
    case Kind::Normal: return p1_;
    case Kind::Lomax:
      return p1_ > 1.0 ? 1.0 / (p1_ - 1.0) : std::numeric_limits<double>::infinity();
    case Kind::Exponential: return 1.0 / p1_;
  }
  return 0.0;
}

StateVector sample(const ParametricModel& model, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw DomainError("sample size must be >= 1");
  Rng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = model.quantile(UnitPoint::from_lower(rng.uniform_open01()));
  return StateVector(std::move(out));
}

}  // namespace meandev
