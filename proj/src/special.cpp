#include "acctime/special.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "acctime/errors.hpp"

namespace acctime::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_order(int n) {
  if (n > kMaxOrder) {
    throw ArgumentOutOfRange("Bessel order " + std::to_string(n) +
                             " exceeds supported maximum " +
                             std::to_string(kMaxOrder));
  }
}

// Power series I_n(z) = sum_k (z/2)^(n+2k) / (k! (n+k)!).
// All terms positive, so there is no cancellation; used for z <= 15.
double bessel_i_series(int n, double z) {
  double term = std::exp(n * std::log(z / 2.0) - std::lgamma(n + 1.0));
  if (term == 0.0) return 0.0;
  double sum = term;
  const double q = z * z / 4.0;
  for (int k = 1; k <= 400; ++k) {
    term *= q / (static_cast<double>(k) * (n + k));
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

// Downward (Miller) recurrence from a start order well above both n and z,
// normalized through exp(z) = I_0(z) + 2 sum_{k>=1} I_k(z).
double bessel_i_miller(int n, double z) {
  const int top = std::max(n, static_cast<int>(z)) + 30 +
                  static_cast<int>(10.0 * std::sqrt(std::max(n, static_cast<int>(z)) + 1.0));
  double pkp1 = 0.0;       // p_{k+1}
  double pk = 1e-280;      // p_k, arbitrary seed
  double target = (n == top) ? pk : 0.0;
  double acc = (top == 0) ? pk : 2.0 * pk;  // running sum for normalization
  for (int k = top; k >= 1; --k) {
    double pkm1 = pkp1 + (2.0 * k / z) * pk;
    pkp1 = pk;
    pk = pkm1;
    const int idx = k - 1;
    if (idx == n) target = pk;
    acc += (idx == 0) ? pk : 2.0 * pk;
    if (std::abs(pk) > 1e280) {
      const double f = 1e-280;
      pk *= f;
      pkp1 *= f;
      acc *= f;
      target *= f;
    }
  }
  return (target / acc) * std::exp(z);
}

// Series for K_0, K_1 with z <= 2 (standard low-order expansions in
// z^2/4 with harmonic-number coefficients).
double bessel_k0_series(double z) {
  const double gamma = 0.57721566490153286;
  const double q = z * z / 4.0;
  double wk = 1.0;  // (z^2/4)^k / (k!)^2
  double hk = 0.0;
  double sum = 0.0;
  for (int k = 1; k <= 60; ++k) {
    wk *= q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    const double term = wk * hk;
    sum += term;
    if (term < kEps * (1.0 + std::abs(sum))) break;
  }
  return -(std::log(z / 2.0) + gamma) * bessel_i_series(0, z) + sum;
}

double bessel_k1_series(double z) {
  const double gamma = 0.57721566490153286;
  const double q = z * z / 4.0;
  double wk = 1.0;  // (z^2/4)^k / (k! (k+1)!)
  double hk = 0.0;
  double hk1 = 1.0;
  double sum = (hk + hk1 - 2.0 * gamma);  // k = 0 term
  for (int k = 1; k <= 60; ++k) {
    wk *= q / (static_cast<double>(k) * (k + 1));
    hk += 1.0 / k;
    hk1 += 1.0 / (k + 1.0);
    const double term = wk * (hk + hk1 - 2.0 * gamma);
    sum += term;
    if (std::abs(term) < kEps * (1.0 + std::abs(sum))) break;
  }
  return 1.0 / z + std::log(z / 2.0) * bessel_i_series(1, z) - (z / 4.0) * sum;
}

// Temme/Thompson-Barnett continued fraction (CF2) evaluated at order 0;
// returns {K_0(z), K_1(z)} for z > 2 at near machine precision.
void bessel_k01_cf2(double z, double& k0, double& k1) {
  double b = 2.0 * (1.0 + z);
  double d = 1.0 / b;
  double h = d, delh = d;
  double q1 = 0.0, q2 = 1.0;
  const double a1 = 0.25;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i <= 20000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) <= kEps) break;
  }
  h = a1 * h;
  k0 = std::sqrt(M_PI / (2.0 * z)) * std::exp(-z) / s;
  k1 = k0 * (z + 0.5 - h) / z;
}

void bessel_k01(double z, double& k0, double& k1) {
  if (z <= 2.0) {
    k0 = bessel_k0_series(z);
    k1 = bessel_k1_series(z);
  } else {
    bessel_k01_cf2(z, k0, k1);
  }
}

}  // namespace

double bessel_i(int n, double z) {
  n = std::abs(n);
  check_order(n);
  if (!(z >= 0.0)) throw ArgumentOutOfRange("bessel_i requires z >= 0");
  if (z > kMaxArgument) {
    throw ArgumentOutOfRange("bessel_i argument " + std::to_string(z) +
                             " exceeds overflow guard " +
                             std::to_string(kMaxArgument));
  }
  if (z == 0.0) return n == 0 ? 1.0 : 0.0;
  return z <= 15.0 ? bessel_i_series(n, z) : bessel_i_miller(n, z);
}

double bessel_k(int n, double z) {
  n = std::abs(n);
  check_order(n);
  if (!(z > 0.0)) throw ArgumentOutOfRange("bessel_k requires z > 0");
  double k0, k1;
  bessel_k01(z, k0, k1);
  if (n == 0) return k0;
  if (n == 1) return k1;
  // upward recurrence, stable for K
  double km1 = k0, k = k1;
  for (int m = 1; m < n; ++m) {
    const double kp1 = km1 + (2.0 * m / z) * k;
    if (!std::isfinite(kp1)) {
      throw ArgumentOutOfRange("bessel_k overflow at order " +
                               std::to_string(m + 1));
    }
    km1 = k;
    k = kp1;
  }
  return k;
}

double erfc(double z) { return std::erfc(z); }

double erfcx(double z) {
  if (z < 0.0) {
    if (z < -26.0) {
      throw ArgumentOutOfRange("erfcx overflows for z < -26");
    }
    return 2.0 * std::exp(z * z) - erfcx(-z);
  }
  // exp(z^2) stays finite and erfc(z) normal up to z ~ 26; switch to the
  // asymptotic series well before that, where it is fully converged
  if (z < 25.0) return std::exp(z * z) * std::erfc(z);
  // 1/(z sqrt(pi)) sum_k (-1)^k (2k-1)!!/(2 z^2)^k
  const double inv2z2 = 1.0 / (2.0 * z * z);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 40; ++k) {
    term *= -(2.0 * k - 1.0) * inv2z2;
    sum += term;
    if (std::abs(term) < kEps * sum) break;
  }
  return sum / (z * std::sqrt(M_PI));
}

namespace {

// ratio tables may look one order past the value cap
void check_ratio_order(int nmax) {
  if (nmax > kMaxOrder + 8) {
    throw ArgumentOutOfRange("ratio table order " + std::to_string(nmax) +
                             " exceeds supported maximum");
  }
}

}  // namespace

std::vector<double> bessel_i_ratios(double z, int nmax) {
  check_ratio_order(nmax);
  if (!(z >= 0.0)) throw ArgumentOutOfRange("bessel_i_ratios requires z >= 0");
  std::vector<double> r(nmax + 1, 0.0);
  if (z < 1e-300) return r;
  const int top = std::max(nmax, static_cast<int>(z)) + 30 +
                  static_cast<int>(10.0 * std::sqrt(std::max(nmax, static_cast<int>(z)) + 1.0));
  double pkp1 = 0.0;
  double pk = 1e-280;
  for (int k = top; k >= 1; --k) {
    double pkm1 = pkp1 + (2.0 * k / z) * pk;
    if (k <= nmax) r[k] = pk / pkm1;
    pkp1 = pk;
    pk = pkm1;
    if (std::abs(pk) > 1e280) {
      pk *= 1e-280;
      pkp1 *= 1e-280;
    }
  }
  return r;
}

std::vector<double> bessel_k_ratios(double z, int nmax) {
  check_ratio_order(nmax);
  if (!(z > 0.0)) throw ArgumentOutOfRange("bessel_k_ratios requires z > 0");
  std::vector<double> c(nmax + 1, 0.0);
  double k0, k1;
  bessel_k01(z, k0, k1);
  if (nmax >= 1) c[1] = k1 / k0;
  for (int n = 1; n < nmax; ++n) {
    c[n + 1] = 1.0 / c[n] + 2.0 * n / z;
  }
  return c;
}

}  // namespace acctime::special
