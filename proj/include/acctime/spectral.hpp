#pragma once

#include "acctime/geometry.hpp"
#include "acctime/scene.hpp"

namespace acctime {

// Principal-eigenvalue relaxation estimate. lambda_root is the smallest
// positive root of det(I + 2 pi nu D Gtr(-lambda)) = 0 with the truncated
// small-lambda matrix Gtr(-lambda) = -E/(lambda |Omega|) + G0; tau is its
// reciprocal. lambda_two_term is the closed two-term expansion (N = 1) or
// the leading value 2 pi nu D N / |Omega| (N > 1).
struct SpectralEstimate {
  double lambda_root = 0.0;
  double lambda_two_term = 0.0;
  double tau = 0.0;
  int n_holes = 0;
};

// Depends only on the hole positions, nu and D; the boundary values and
// the initial condition never enter.
SpectralEstimate principal_eigenvalue(const Scene& scene);

// Truncated accumulation time from the leading eigenmode (single hole):
//   T0(x) = (|Omega| Phi1 - Gamma0)/(2 pi nu D Phi1)
//         + (Gamma0/Phi1) G0(x1, x0)
//         + ((|Omega| Phi1 - Gamma0)/Phi1) [R0(x1,x1) - G0(x, x1)].
double truncated_acc_time(const Scene& scene, const Vec2& x);

}  // namespace acctime
