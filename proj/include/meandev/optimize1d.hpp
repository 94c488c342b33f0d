#pragma once

#include <cmath>
#include <utility>

namespace meandev {

/// Golden-section search for a maximum of f on [lo, hi]; stops when the
/// bracket is narrower than tol. Returns (argmax, max). Exact for unimodal f.
template <class F>
std::pair<double, double> golden_section_max(F&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int it = 0; it < 400 && (b - a) > tol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  std::pair<double, double> best = fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
  for (double x : {a, b}) {
    const double fx = f(x);
    if (fx > best.second) best = {x, fx};
  }
  return best;
}

}  // namespace meandev
