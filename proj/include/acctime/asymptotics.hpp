#pragma once

#include <vector>

#include <Eigen/Dense>

#include "acctime/geometry.hpp"
#include "acctime/greens_disc.hpp"
#include "acctime/scene.hpp"

namespace acctime {

// Interaction matrix of Green's-function couplings between hole centers:
// entries(i,j) = G(x_i,s|x_j) off the diagonal and the regular part
// R(x_i,s|x_i) on it. s = 0 selects the Laplace-limit matrix built from
// G0/R0.
struct InteractionMatrix {
  Eigen::MatrixXd entries;
  double s = 0.0;
};

// Coefficients of the Laplace-space outer solution at a fixed s:
// (I + 2 pi nu D G(s)) a_s = -D V with V_j = Phi_j/s - Gamma0 G(x_j,s|x0).
struct LaplaceCoeffs {
  Eigen::VectorXd a_s;
  Eigen::VectorXd v_rhs;
  double s = 0.0;
};

// Steady-state interaction coefficients: the resummed A_j(nu) with
// sum_j a_j = 0, the constant DeltaGamma of u*(x), and mean(Phi).
struct SteadyCoeffs {
  Eigen::VectorXd a;
  double delta_gamma = 0.0;
  double phi_bar = 0.0;
};

InteractionMatrix build_interaction_matrix(const Scene& scene, double s);

LaplaceCoeffs solve_interaction_coeffs(const Scene& scene, double s);

// Laplace-space outer solution
//   u~(x,s) = Gamma0 G(x,s|x0) - 2 pi nu sum_j A_j(nu,s) G(x,s|x_j).
double outer_solution_laplace(const Scene& scene, const Vec2& x, double s);

SteadyCoeffs steady_state_coeffs(const Scene& scene);

// Steady state u*(x) = mean(Phi) - 2 pi nu sum_k a_k G0(x,x_k)
//                      + (2 pi nu / N) sum_{ij} a_i G0_ij.
double steady_state(const Scene& scene, const Vec2& x);
double steady_state(const Scene& scene, const SteadyCoeffs& coeffs, const Vec2& x);

// Accumulation time to O(1) in the log-gauge expansion (explicit
// Green's-function formula).
double acc_time_order1(const Scene& scene, const Vec2& x);

// Accumulation time with the interaction system solved exactly in nu:
// T = (F(x,0) - F(x,s)) / (s F(x,0)) with F(x,s) = s u~(x,s), evaluated
// at s_base and s_base/2 with one Richardson step.
double acc_time_nonperturbative(const Scene& scene, const Vec2& x,
                                double s_base = 1e-2);

// Reusable evaluators for grid sweeps: precompute the coefficient solves
// once, then evaluate per point. All const methods are thread-safe.

class SteadyStateField {
 public:
  explicit SteadyStateField(const Scene& scene);
  double operator()(const Vec2& x) const;

  const SteadyCoeffs& coeffs() const { return coeffs_; }

 private:
  const Scene scene_;
  SteadyCoeffs coeffs_;
  double coupling_term_ = 0.0;  // (2 pi nu / N) sum_ij a_i G0_ij
};

class AccTimeOrder1Field {
 public:
  explicit AccTimeOrder1Field(const Scene& scene);
  double operator()(const Vec2& x) const;

 private:
  const Scene scene_;
  Eigen::MatrixXd g0mat_;       // Laplace-limit interaction matrix
  double sum_g_holes_x0_ = 0.0; // sum_j G0(x_j, x0)
  double sum_gg_ = 0.0;         // sum_{ij} G0_ij
  double sum_dphi_gg_ = 0.0;    // sum_{ij} (phibar - phi_i) G0_ij
};

class AccTimeNonperturbativeField {
 public:
  AccTimeNonperturbativeField(const Scene& scene, double s_base = 1e-2);
  double operator()(const Vec2& x) const;

 private:
  double f_of_s(const Vec2& x, const HelmholtzGreens& greens,
                const LaplaceCoeffs& coeffs) const;

  const Scene scene_;
  double s_base_;
  SteadyStateField steady_;
  HelmholtzGreens greens_hi_, greens_lo_;
  LaplaceCoeffs coeffs_hi_, coeffs_lo_;
};

}  // namespace acctime
