#pragma once

#include "meandev/distortion.hpp"
#include "meandev/riskweight.hpp"
#include "meandev/state_vector.hpp"

namespace meandev {

/// Losses with mean m and central moment E|X - m|^order = v^order.
struct MomentUncertainty {
  double m;
  double v;
  double order = 2.0;
};

/// Laws within type-`order` Wasserstein distance epsilon of the empirical
/// law of `center`. Only order 2 has a closed inner problem.
struct WassersteinUncertainty {
  StateVector center;
  double epsilon;
  double order = 2.0;
};

/// Worst case of g(D_h(X)) + E[X] over the moment set:
///   order 2: g(v ||h'||_2) + m;  otherwise g(v [h]_q) + m with q = order / (order - 1).
/// Whether h is admissible for the chosen order (finite ||h'||_q) is only checked
/// through finiteness of the norm.
double worstcase_moment(const RiskWeightFunction& g, const DistortionFunction& h, const MomentUncertainty& u);

/// Worst case over the type-2 Wasserstein ball:
///   sup_{t in [-1,1]} g(eps sqrt(1 - t^2) ||h'||_2 + D_h(X)) + t eps + E[X],
/// maximized on a 200-point t grid and refined by golden section around the
/// best grid point. Returns md_eval of the center exactly when eps = 0.
double worstcase_wasserstein(const RiskWeightFunction& g, const DistortionFunction& h,
                             const WassersteinUncertainty& u);

}  // namespace meandev
