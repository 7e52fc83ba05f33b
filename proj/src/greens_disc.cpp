#include "acctime/greens_disc.hpp"

#include <cmath>
#include <string>

#include "acctime/errors.hpp"
#include "acctime/special.hpp"

namespace acctime {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kEulerGamma = 0.57721566490153286;
constexpr double kCoincidentTol = 1e-12;

void check_inside_closed_disc(const Vec2& p, const char* name) {
  if (norm(p) > 1.0 + 1e-12) {
    throw ArgumentOutOfRange(std::string(name) + " lies outside the closed unit disc");
  }
}

}  // namespace

HelmholtzParams HelmholtzParams::make(double s, double D, double tol, int n_max) {
  if (!(s > 0.0)) throw ArgumentOutOfRange("HelmholtzParams requires s > 0");
  if (!(D > 0.0)) throw ArgumentOutOfRange("HelmholtzParams requires D > 0");
  if (!(tol > 0.0)) throw ArgumentOutOfRange("HelmholtzParams requires tol > 0");
  HelmholtzParams p;
  p.s = s;
  p.omega = std::sqrt(s / D);
  p.tol = tol;
  p.n_max = n_max;
  return p;
}

GreensEval g0(const Vec2& x, const Vec2& xi, double D) {
  check_inside_closed_disc(x, "x");
  check_inside_closed_disc(xi, "xi");
  const double rho = dist(x, xi);
  if (rho < kCoincidentTol) {
    throw CoincidentPoints("g0 at coincident points; use r0_coincident");
  }
  const double a = norm(xi);
  // image term -ln| x|xi| - xi/|xi| |; its xi -> 0 limit is -ln 1 = 0
  double image = 0.0;
  if (a > 1e-10) {
    const Vec2 img = a * x - (1.0 / a) * xi;
    image = -std::log(norm(img));
  }
  GreensEval out;
  out.regular_part =
      (image + 0.5 * (norm2(x) + norm2(xi)) - 0.75) / (kTwoPi * D);
  out.value = -std::log(rho) / (kTwoPi * D) + out.regular_part;
  return out;
}

double r0_coincident(const Vec2& xi, double D) {
  const double a2 = norm2(xi);
  if (!(a2 < 1.0)) {
    throw ArgumentOutOfRange("r0_coincident requires |xi| < 1");
  }
  return (-std::log1p(-a2) + a2 - 0.75) / (kTwoPi * D);
}

HelmholtzGreens::HelmholtzGreens(const HelmholtzParams& params, double D)
    : params_(params), D_(D) {
  const double w = params_.omega;
  if (!(w > 0.0)) throw ArgumentOutOfRange("HelmholtzGreens requires omega > 0");
  k0w_ = special::bessel_k(0, w);
  k1w_ = special::bessel_k(1, w);
  i0w_ = special::bessel_i(0, w);
  i1w_ = special::bessel_i(1, w);
  kratio_ = special::bessel_k_ratios(w, params_.n_max + 1);
  iratio_ = special::bessel_i_ratios(w, params_.n_max + 1);
}

// Sum over angular orders of -K_n'(w)/I_n'(w) I_n(w r) I_n(w r0) cos(n dtheta),
// folded over +-n. Terms are built multiplicatively from order ratios so
// that no individual K_n/I_n value can overflow or underflow. Terms decay
// like (r r0)^n once n exceeds omega, which sizes the ratio tables.
double HelmholtzGreens::mode_sum(double r, double r0, double dtheta) const {
  const double w = params_.omega;
  const double i0r = special::bessel_i(0, w * r);
  const double i0r0 = special::bessel_i(0, w * r0);

  // n = 0: K_0' = -K_1, I_0' = I_1
  const double base = (k1w_ / i1w_) * i0r * i0r0;

  const double decay = std::max(r * r0, 1e-3);
  int n_est = static_cast<int>(std::ceil(std::log(0.5 * params_.tol) / std::log(decay))) +
              10 + static_cast<int>(std::ceil(w));
  n_est = std::min(std::max(n_est, 8), params_.n_max);

  for (int pass = 0; pass < 2; ++pass) {
    const int n_top = pass == 0 ? n_est : params_.n_max;
    const std::vector<double> a = special::bessel_i_ratios(w * r, n_top + 1);
    const std::vector<double> b = special::bessel_i_ratios(w * r0, n_top + 1);
    const std::vector<double>& c = kratio_;
    const std::vector<double>& d = iratio_;

    double sum = base;
    // u_n = K_{n-1}(w)/I_{n-1}(w) * I_n(w r) * I_n(w r0)
    double u = (k0w_ / i0w_) * (a[1] * i0r) * (b[1] * i0r0);
    int below_tol = 0;
    for (int n = 1; n <= n_top; ++n) {
      const double term = u * (1.0 + c[n] * c[n + 1]) / (1.0 + d[n] * d[n + 1]);
      sum += 2.0 * term * std::cos(n * dtheta);
      if (term < params_.tol) {
        if (++below_tol >= 2) return sum;
      } else {
        below_tol = 0;
      }
      u *= c[n] * a[n + 1] * b[n + 1] / d[n];
    }
    if (n_top == params_.n_max) break;
  }
  throw SeriesNotConverged(
      "Helmholtz mode sum did not reach tol " + std::to_string(params_.tol) +
      " within n_max = " + std::to_string(params_.n_max));
}

GreensEval HelmholtzGreens::eval(const Vec2& x, const Vec2& x0) const {
  check_inside_closed_disc(x, "x");
  check_inside_closed_disc(x0, "x0");
  const double rho = dist(x, x0);
  if (rho < kCoincidentTol) {
    throw CoincidentPoints("g_helmholtz at coincident points; use r_helmholtz_coincident");
  }
  const double w = params_.omega;
  const double modes = mode_sum(norm(x), norm(x0), angle(x) - angle(x0));
  GreensEval out;
  out.value = (special::bessel_k(0, w * rho) + modes) / (kTwoPi * D_);
  out.regular_part = out.value + std::log(rho) / (kTwoPi * D_);
  return out;
}

double HelmholtzGreens::regular_coincident(const Vec2& x0) const {
  check_inside_closed_disc(x0, "x0");
  const double w = params_.omega;
  const double r0 = norm(x0);
  // lim_{rho->0} K_0(w rho) + ln rho = ln 2 - gamma - ln w
  const double modes = mode_sum(r0, r0, 0.0);
  return (-std::log(w / 2.0) - kEulerGamma + modes) / (kTwoPi * D_);
}

GreensEval g_helmholtz(const Vec2& x, const Vec2& x0,
                       const HelmholtzParams& params, double D) {
  return HelmholtzGreens(params, D).eval(x, x0);
}

double r_helmholtz_coincident(const Vec2& x0, const HelmholtzParams& params,
                              double D) {
  return HelmholtzGreens(params, D).regular_coincident(x0);
}

namespace {

// Quadratic (Lagrange) extrapolation through (h/2, h, 2h) evaluated at s.
double quad_extrapolate(double s, double h, double fh2, double fh, double f2h) {
  const double s1 = 0.5 * h, s2 = h, s3 = 2.0 * h;
  const double l1 = (s - s2) * (s - s3) / ((s1 - s2) * (s1 - s3));
  const double l2 = (s - s1) * (s - s3) / ((s2 - s1) * (s2 - s3));
  const double l3 = (s - s1) * (s - s2) / ((s3 - s1) * (s3 - s2));
  return l1 * fh2 + l2 * fh + l3 * f2h;
}

// d/ds [G(s) - 1/(s |Omega|)] at s = 0 for the provided evaluator.
template <typename EvalAtS>
double derivative_at_zero(EvalAtS&& hatG, double h) {
  // \hat G at the positive sample points
  const double gq = hatG(0.25 * h);
  const double gh2 = hatG(0.5 * h);
  const double gh = hatG(h);
  const double g2h = hatG(2.0 * h);
  // negative-s values by quadratic extrapolation from the scaled stencils
  const double gmh = quad_extrapolate(-h, h, gh2, gh, g2h);
  const double gmh2 = quad_extrapolate(-0.5 * h, 0.5 * h, gq, gh2, gh);
  const double d_h = (gh - gmh) / (2.0 * h);
  const double d_h2 = (gh2 - gmh2) / h;
  return (4.0 * d_h2 - d_h) / 3.0;
}

}  // namespace

double g1(const Vec2& x, const Vec2& x0, double D, double h) {
  auto hatG = [&](double s) {
    const HelmholtzParams p = HelmholtzParams::make(s, D);
    return g_helmholtz(x, x0, p, D).value - 1.0 / (s * M_PI);
  };
  return derivative_at_zero(hatG, h);
}

double g1_coincident(const Vec2& x0, double D, double h) {
  auto hatR = [&](double s) {
    const HelmholtzParams p = HelmholtzParams::make(s, D);
    return r_helmholtz_coincident(x0, p, D) - 1.0 / (s * M_PI);
  };
  return derivative_at_zero(hatR, h);
}

}  // namespace acctime
