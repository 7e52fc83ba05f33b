#include "acctime/morphogen1d.hpp"

#include <cmath>

#include "acctime/errors.hpp"
#include "acctime/special.hpp"

namespace acctime::morphogen1d {

namespace {

// adaptive Simpson on [a,b]
double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(F&& f, double a, double m, double b, double fa,
                        double fm, double fb, double whole, double tol,
                        int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth > 48) {
    if (depth > 48) {
      throw QuadratureNotConverged("adaptive Simpson recursion limit reached");
    }
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive_simpson(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

template <typename F>
double integrate(F&& f, double a, double b, double tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  return adaptive_simpson(f, a, m, b, fa, fm, fb, simpson(fa, fm, fb, a, b),
                          tol, 0);
}

}  // namespace

double Params::xi() const { return std::sqrt(D / k); }

Params make_params(double D, double k, double J, double L) {
  if (!(D > 0.0) || !(k > 0.0) || !(J > 0.0) || !(L > 0.0)) {
    throw NonpositiveParameter("morphogen parameters must all be positive");
  }
  return Params{D, k, J, L};
}

double steady_1d(double x, const Params& p) {
  return (p.J * p.xi() / p.D) * std::exp(-x / p.xi());
}

double fractional_deviation_1d(double x, double t, const Params& p) {
  if (t <= 0.0) return 1.0;
  const double xi = p.xi();
  const double sq = std::sqrt(p.D * t);
  const double a = sq / xi - x / (2.0 * sq);
  const double b = sq / xi + x / (2.0 * sq);
  // exp(2x/xi) erfc(b) = exp(-a^2) erfcx(b) since 2x/xi = b^2 - a^2
  return 0.5 * special::erfc(a) + 0.5 * std::exp(-a * a) * special::erfcx(b);
}

double concentration_1d(double x, double t, const Params& p) {
  return steady_1d(x, p) * (1.0 - fractional_deviation_1d(x, t, p));
}

double acc_time_1d_numeric(double x, const Params& p) {
  // Z decays like exp(-k t); march the cutoff until the tail is dead.
  double t_max = 10.0 / p.k + x * x / p.D;
  while (fractional_deviation_1d(x, t_max, p) > 1e-10) {
    t_max *= 2.0;
    if (t_max > 1e12 / p.k) {
      throw QuadratureNotConverged("accumulation-time integrand tail does not decay");
    }
  }
  // substitute t = w^2 to remove the sqrt(t) kink at the origin
  auto g = [&](double w) {
    return 2.0 * w * fractional_deviation_1d(x, w * w, p);
  };
  const double scale = 1.0 / (2.0 * p.k) * (1.0 + x / p.xi());
  return integrate(g, 0.0, std::sqrt(t_max), 1e-9 * (1.0 + scale));
}

double acc_time_1d_exact(double x, const Params& p) {
  return (1.0 + std::sqrt(p.k / p.D) * x) / (2.0 * p.k);
}

double truncated_acc_time_1d(double x, const Params& p) {
  const double xi = p.xi();
  return (xi / (p.k * p.L)) * (1.0 - std::exp(-p.L / xi)) * std::exp(x / xi);
}

}  // namespace acctime::morphogen1d
