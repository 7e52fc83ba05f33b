#pragma once

#include <vector>

namespace acctime::special {

// Largest supported integer order for the modified Bessel functions.
inline constexpr int kMaxOrder = 256;
// Arguments above this overflow exp(z) during normalization.
inline constexpr double kMaxArgument = 700.0;

// Modified Bessel function of the first kind I_n(z), z in [0, 700],
// |n| <= kMaxOrder. Relative accuracy ~1e-14.
double bessel_i(int n, double z);

// Modified Bessel function of the second kind K_n(z), z > 0.
double bessel_k(int n, double z);

// Complementary error function (absolute accuracy well below 1e-12).
double erfc(double z);

// Scaled complementary error function exp(z^2) erfc(z).
double erfcx(double z);

// Ratio table r[n] = I_n(z)/I_{n-1}(z) for n = 1..nmax (r[0] unused).
// Computed by downward recurrence, so it stays accurate where the
// individual I_n under- or overflow. z = 0 gives all-zero ratios.
std::vector<double> bessel_i_ratios(double z, int nmax);

// Ratio table c[n] = K_n(z)/K_{n-1}(z) for n = 1..nmax (c[0] unused).
std::vector<double> bessel_k_ratios(double z, int nmax);

}  // namespace acctime::special
