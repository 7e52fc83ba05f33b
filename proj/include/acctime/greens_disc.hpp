#pragma once

#include <vector>

#include "acctime/geometry.hpp"

namespace acctime {

// A Green's function value together with its regular part. Whenever
// is_coincident is false,
//   value - regular_part == -ln|x - x0| / (2 pi D)
// holds exactly as computed.
struct GreensEval {
  double value = 0.0;
  double regular_part = 0.0;
  bool is_coincident = false;
};

// Evaluation parameters of the modified Helmholtz Green's function.
// omega = sqrt(s/D); the series over angular orders is truncated once
// the absolute term drops below tol, with a hard cap at n_max.
struct HelmholtzParams {
  double s = 0.0;
  double omega = 0.0;
  double tol = 1e-12;
  int n_max = 256;

  static HelmholtzParams make(double s, double D, double tol = 1e-12,
                              int n_max = 256);
};

// Generalized Neumann Green's function of Laplace's equation on the unit
// disc (zero mean, reflecting boundary):
//   G0(x,xi) = (1/(2 pi D)) [ -ln|x-xi| - ln| x|xi| - xi/|xi| |
//                             + (|x|^2+|xi|^2)/2 - 3/4 ].
// The regular part drops the first logarithm. xi -> 0 is handled by the
// analytic limit of the image term.
GreensEval g0(const Vec2& x, const Vec2& xi, double D);

// Regular part at coincident points, R0(xi,xi).
double r0_coincident(const Vec2& xi, double D);

// Modified Helmholtz Green's function of the unit disc with reflecting
// boundary, D lap G - s G = -delta. Normalized so that its integral over
// the disc equals 1/s. Evaluated as the free-space kernel K_0(omega rho)
// plus a series of regular modes that cancels the boundary flux.
//
// Construct once per (s, D) and reuse across evaluation points: the
// order-ratio tables at omega are cached.
class HelmholtzGreens {
 public:
  HelmholtzGreens(const HelmholtzParams& params, double D);

  GreensEval eval(const Vec2& x, const Vec2& x0) const;
  double regular_coincident(const Vec2& x0) const;

  const HelmholtzParams& params() const { return params_; }

 private:
  // Boundary-correction series at (r, r0) with angular separation dtheta.
  double mode_sum(double r, double r0, double dtheta) const;

  HelmholtzParams params_;
  double D_;
  double k0w_, k1w_, i0w_, i1w_;
  std::vector<double> kratio_;  // K_n(w)/K_{n-1}(w)
  std::vector<double> iratio_;  // I_n(w)/I_{n-1}(w)
};

GreensEval g_helmholtz(const Vec2& x, const Vec2& x0,
                       const HelmholtzParams& params, double D);
double r_helmholtz_coincident(const Vec2& x0, const HelmholtzParams& params,
                              double D);

// First-order coefficient of the small-s expansion
//   G(x,s|x0) = 1/(s |Omega|) + G0(x,x0) + s G1(x,x0) + O(s^2),
// obtained by numerical s-differentiation: the series only evaluates at
// s > 0, so values at -h and -h/2 come from quadratic extrapolation
// through s in {h/2, h, 2h}, followed by central differences at +-h and
// +-h/2 and one Richardson step. Exposed for diagnostics.
double g1(const Vec2& x, const Vec2& x0, double D, double h = 1e-2);

// Same scheme applied to the coincident regular part.
double g1_coincident(const Vec2& x0, double D, double h = 1e-2);

}  // namespace acctime
