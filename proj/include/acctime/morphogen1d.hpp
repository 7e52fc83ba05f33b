#pragma once

namespace acctime::morphogen1d {

// 1D gradient-formation model: diffusion with bulk degradation on [0, L],
// constant influx J at x = 0, reflecting far end, zero initial data.
struct Params {
  double D = 1.0;  // diffusivity
  double k = 1.0;  // degradation rate
  double J = 1.0;  // boundary flux
  double L = 20.0; // domain length

  double xi() const;  // length constant sqrt(D/k)
};

// Throws NonpositiveParameter unless all of D, k, J, L are positive.
Params make_params(double D, double k, double J, double L);

// Steady profile u*(x) = (J xi / D) exp(-x/xi), valid for L >> xi.
double steady_1d(double x, const Params& p);

// Time-dependent concentration (semi-infinite closed form); t = 0
// returns 0 by the analytic limit. The exp(2x/xi) erfc(...) product is
// evaluated through the scaled complementary error function, so large
// x/small t cannot overflow.
double concentration_1d(double x, double t, const Params& p);

// Fractional deviation from steady state, Z = 1 - u/u*.
double fractional_deviation_1d(double x, double t, const Params& p);

// Exact accumulation time T(x) = (1/2k)(1 + sqrt(k/D) x).
double acc_time_1d_exact(double x, const Params& p);

// T(x) = integral_0^inf Z(x,t) dt by adaptive quadrature with an
// exponential-tail cutoff; matches the closed form to ~1e-6.
double acc_time_1d_numeric(double x, const Params& p);

// Leading-eigenmode truncation on the finite interval:
//   T0(x) = (xi/(k L)) (1 - exp(-L/xi)) exp(x/xi).
// Grows exponentially in x and badly overestimates the linear T(x).
double truncated_acc_time_1d(double x, const Params& p);

}  // namespace acctime::morphogen1d
