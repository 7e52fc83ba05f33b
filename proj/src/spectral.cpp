#include "acctime/spectral.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "acctime/asymptotics.hpp"
#include "acctime/errors.hpp"
#include "acctime/greens_disc.hpp"

namespace acctime {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kSingularGuard = 1e-9;

}  // namespace

SpectralEstimate principal_eigenvalue(const Scene& scene) {
  if (scene.holes.empty()) {
    throw NonpositiveParameter("principal_eigenvalue needs at least one hole");
  }
  const int n = scene.n_holes();
  const double area = scene.domain_area;
  const double nu = scene.nu;
  const double D = scene.D;

  // Only the geometry enters: rebuild G0 from hole centers alone.
  Eigen::MatrixXd g0mat(n, n);
  for (int i = 0; i < n; ++i) {
    g0mat(i, i) = r0_coincident(scene.holes[i].center, D);
    for (int j = i + 1; j < n; ++j) {
      const double v = g0(scene.holes[i].center, scene.holes[j].center, D).value;
      g0mat(i, j) = v;
      g0mat(j, i) = v;
    }
  }

  auto det = [&](double lambda) {
    Eigen::MatrixXd gtr =
        g0mat - Eigen::MatrixXd::Constant(n, n, 1.0 / (lambda * area));
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(n, n) + kTwoPi * nu * D * gtr;
    return m.determinant();
  };

  // The determinant diverges at lambda -> 0+; take the first sign change.
  const double lambda_hi = 10.0 * kTwoPi * nu * D * n / area;
  const int n_scan = 400;
  double lo = 1e-6, f_lo = det(lo);
  double hi = 0.0, f_hi = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= n_scan; ++i) {
    const double lam = 1e-6 + (lambda_hi - 1e-6) * i / n_scan;
    const double f = det(lam);
    if (f_lo * f <= 0.0) {
      hi = lam;
      f_hi = f;
      bracketed = true;
      break;
    }
    lo = lam;
    f_lo = f;
  }
  if (!bracketed) {
    throw NoRootBracketed("no determinant sign change on (1e-6, " +
                          std::to_string(lambda_hi) + "]");
  }
  for (int it = 0; it < 90; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f = det(mid);
    if (f_lo * f <= 0.0) {
      hi = mid;
      f_hi = f;
    } else {
      lo = mid;
      f_lo = f;
    }
  }
  // secant polish on the (already tiny) bracket
  double a = lo, b = hi, fa = f_lo, fb = f_hi;
  for (int it = 0; it < 8 && fb != fa; ++it) {
    const double c = b - fb * (b - a) / (fb - fa);
    if (!(c > 0.0) || !std::isfinite(c)) break;
    a = b;
    fa = fb;
    b = c;
    fb = det(c);
    if (std::abs(fb) <= 1e-12 * std::max(std::abs(fa), 1e-300)) break;
  }
  const double root = b;

  SpectralEstimate out;
  out.n_holes = n;
  out.lambda_root = root;
  out.tau = 1.0 / root;
  if (n == 1) {
    const double r0 = g0mat(0, 0);
    out.lambda_two_term = (kTwoPi * nu * D / area) * (1.0 - kTwoPi * nu * D * r0);
  } else {
    out.lambda_two_term = kTwoPi * nu * D * n / area;
  }
  return out;
}

double truncated_acc_time(const Scene& scene, const Vec2& x) {
  if (scene.n_holes() != 1) {
    throw UnsupportedHoleCount(
        "truncated_acc_time is derived for a single hole (N = " +
        std::to_string(scene.n_holes()) + ")");
  }
  const Vec2 x1 = scene.holes[0].center;
  const double phi1 = scene.holes[0].phi;
  const double area = scene.domain_area;
  if (dist(x, x1) <= scene.epsilon) {
    throw EvaluationInsideHole("x lies inside the hole");
  }
  if (dist(x, x1) < kSingularGuard) {
    throw EvaluationAtSingularPoint("x coincides with the hole center");
  }
  double t0 = (area * phi1 - scene.gamma0) / (kTwoPi * scene.nu * scene.D * phi1);
  if (scene.gamma0 > 0.0) {
    t0 += (scene.gamma0 / phi1) * g0(x1, scene.x0, scene.D).value;
  }
  t0 += ((area * phi1 - scene.gamma0) / phi1) *
        (r0_coincident(x1, scene.D) - g0(x, x1, scene.D).value);
  return t0;
}

}  // namespace acctime
