#pragma once

#include <functional>
#include <span>

#include "meandev/distributions.hpp"

namespace meandev::quadrature {

struct Options {
  double rel_tol = 1e-10;
  unsigned max_depth = 15;
  // A tail chunk whose contribution falls below this (relative to the running
  // total, floored at 1) ends the integration of an unbounded range.
  double tail_cutoff = 1e-14;
};

using UnitIntegrand = std::function<double(UnitPoint)>;

/// Integral of f over (a, b) within (0,1), split at `breaks` and at 1/2.
/// Panels in the lower half are integrated in tau = -ln(u), panels in the upper
/// half in tau = -ln(1 - u), so endpoint singularities of f at 0 or 1 become
/// exponentially weighted tails. a = {0, 1} and b = {1, 0} denote the open
/// endpoints; those panels are unbounded in tau and are summed in doubling
/// chunks until the tail contribution is negligible.
///
/// Throws NumericError if a tail fails to converge before the representable
/// range of u is exhausted.
double integrate(const UnitIntegrand& f, UnitPoint a, UnitPoint b, std::span<const double> breaks,
                 const Options& opts = {});

/// Integral over the whole of (0,1).
double integrate(const UnitIntegrand& f, std::span<const double> breaks, const Options& opts = {});

}  // namespace meandev::quadrature
