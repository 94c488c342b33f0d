#include "meandev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "meandev/errors.hpp"

namespace meandev::quadrature {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;

constexpr double kInf = std::numeric_limits<double>::infinity();
// exp(-740) is close to the smallest subnormal; u cannot get closer to 0.
constexpr double kTauLimit = 740.0;

template <class G>
double finite_panel(const G& g, double lo, double hi, const Options& opts) {
  if (!(hi > lo)) return 0.0;
  double err = 0.0;
  const double r = Kronrod::integrate(g, lo, hi, opts.max_depth, opts.rel_tol, &err);
  if (!std::isfinite(r)) throw NumericError("quadrature produced a non-finite value");
  return r;
}

template <class G>
double unbounded_panel(const G& g, double lo, const Options& opts) {
  double total = 0.0;
  double start = lo;
  double len = 1.0;
  int small_chunks = 0;
  while (start < kTauLimit) {
    const double end = std::min(start + len, kTauLimit);
    const double chunk = finite_panel(g, start, end, opts);
    total += chunk;
    if (!std::isfinite(total)) throw NumericError("quadrature tail diverges");
    if (std::abs(chunk) <= opts.tail_cutoff * std::max(1.0, std::abs(total))) {
      if (++small_chunks >= 2) return total;
    } else {
      small_chunks = 0;
    }
    start = end;
    len *= 2.0;
  }
  throw NumericError("quadrature tail did not converge: integrand is not integrable at the endpoint");
}

// Integrate f over the panel [c, d] lying entirely in one half of (0,1).
double panel(const UnitIntegrand& f, UnitPoint c, UnitPoint d, const Options& opts) {
  if (d.u <= 0.5) {
    auto g = [&f](double tau) {
      const double u = std::exp(-tau);
      return u == 0.0 ? 0.0 : f(UnitPoint::from_lower(u)) * u;
    };
    const double lo = -std::log(d.u);
    if (c.u == 0.0) return unbounded_panel(g, lo, opts);
    return finite_panel(g, lo, -std::log(c.u), opts);
  }
  auto g = [&f](double tau) {
    const double v = std::exp(-tau);
    return v == 0.0 ? 0.0 : f(UnitPoint::from_upper(v)) * v;
  };
  const double lo = -std::log(c.v);
  if (d.v == 0.0) return unbounded_panel(g, lo, opts);
  return finite_panel(g, lo, -std::log(d.v), opts);
}

}  // namespace

double integrate(const UnitIntegrand& f, UnitPoint a, UnitPoint b, std::span<const double> breaks,
                 const Options& opts) {
  if (!(a.u < b.u || (a.u == b.u && a.v > b.v))) return 0.0;
  std::vector<UnitPoint> cuts{a};
  std::vector<double> inner(breaks.begin(), breaks.end());
  inner.push_back(0.5);
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  for (double t : inner) {
    if (t > a.u && t < b.u) cuts.push_back(UnitPoint::from_lower(t));
  }
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += panel(f, cuts[i], cuts[i + 1], opts);
  return total;
}

double integrate(const UnitIntegrand& f, std::span<const double> breaks, const Options& opts) {
  return integrate(f, UnitPoint{0.0, 1.0}, UnitPoint{1.0, 0.0}, breaks, opts);
}

}  // namespace meandev::quadrature
