#include "acctime/asymptotics.hpp"

#include <cmath>
#include <string>

#include "acctime/errors.hpp"

namespace acctime {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;
constexpr double kSingularGuard = 1e-9;

void require_holes(const Scene& scene) {
  if (scene.holes.empty()) {
    throw NonpositiveParameter("scene has no holes; asymptotic formulas need N >= 1");
  }
}

void check_outer_point(const Scene& scene, const Vec2& x, bool guard_x0) {
  if (norm(x) > 1.0 + 1e-12) {
    throw EvaluationInsideHole("x lies outside the unit disc");
  }
  for (std::size_t j = 0; j < scene.holes.size(); ++j) {
    if (dist(x, scene.holes[j].center) <= scene.epsilon) {
      throw EvaluationInsideHole("x lies inside hole " + std::to_string(j));
    }
  }
  for (std::size_t j = 0; j < scene.holes.size(); ++j) {
    if (dist(x, scene.holes[j].center) < kSingularGuard) {
      throw EvaluationAtSingularPoint("x coincides with hole center " + std::to_string(j));
    }
  }
  if (guard_x0 && scene.gamma0 > 0.0 && dist(x, scene.x0) < kSingularGuard) {
    throw EvaluationAtSingularPoint("x coincides with the initial point x0");
  }
}

void check_conditioning(const Eigen::MatrixXd& m, const char* what) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  // the assembled system is identity + coupling, so its natural scale is
  // at least 1; a tiny smallest singular value means the coupling has
  // cancelled the identity (degenerate even when N = 1, where smax/smin
  // is always 1)
  if (!(smin > 0.0) || std::max(smax, 1.0) / smin > 1e12) {
    throw SingularSystem(std::string(what) +
                         ": interaction system numerically singular "
                         "(nu too large for the asymptotic regime?)");
  }
}

}  // namespace

InteractionMatrix build_interaction_matrix(const Scene& scene, double s) {
  require_holes(scene);
  if (s < 0.0) throw ArgumentOutOfRange("build_interaction_matrix requires s >= 0");
  const int n = scene.n_holes();
  InteractionMatrix out;
  out.s = s;
  out.entries.resize(n, n);
  if (s == 0.0) {
    for (int i = 0; i < n; ++i) {
      out.entries(i, i) = r0_coincident(scene.holes[i].center, scene.D);
      for (int j = i + 1; j < n; ++j) {
        const double v = g0(scene.holes[i].center, scene.holes[j].center, scene.D).value;
        out.entries(i, j) = v;
        out.entries(j, i) = v;
      }
    }
  } else {
    const HelmholtzGreens greens(HelmholtzParams::make(s, scene.D), scene.D);
    for (int i = 0; i < n; ++i) {
      out.entries(i, i) = greens.regular_coincident(scene.holes[i].center);
      for (int j = i + 1; j < n; ++j) {
        const double v = greens.eval(scene.holes[i].center, scene.holes[j].center).value;
        out.entries(i, j) = v;
        out.entries(j, i) = v;
      }
    }
  }
  return out;
}

namespace {

LaplaceCoeffs solve_interaction_coeffs_impl(const Scene& scene, double s,
                                            const HelmholtzGreens& greens) {
  const int n = scene.n_holes();
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) {
    v(j) = scene.holes[j].phi / s;
    if (scene.gamma0 > 0.0) {
      v(j) -= scene.gamma0 * greens.eval(scene.holes[j].center, scene.x0).value;
    }
  }
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = greens.regular_coincident(scene.holes[i].center);
    for (int j = i + 1; j < n; ++j) {
      const double g = greens.eval(scene.holes[i].center, scene.holes[j].center).value;
      m(i, j) = g;
      m(j, i) = g;
    }
  }
  Eigen::MatrixXd sys =
      Eigen::MatrixXd::Identity(n, n) + kTwoPi * scene.nu * scene.D * m;
  check_conditioning(sys, "solve_interaction_coeffs");
  LaplaceCoeffs out;
  out.s = s;
  out.v_rhs = v;
  out.a_s = sys.partialPivLu().solve(-scene.D * v);
  return out;
}

}  // namespace

LaplaceCoeffs solve_interaction_coeffs(const Scene& scene, double s) {
  require_holes(scene);
  if (!(s > 0.0)) throw ArgumentOutOfRange("solve_interaction_coeffs requires s > 0");
  const HelmholtzGreens greens(HelmholtzParams::make(s, scene.D), scene.D);
  return solve_interaction_coeffs_impl(scene, s, greens);
}

double outer_solution_laplace(const Scene& scene, const Vec2& x, double s) {
  require_holes(scene);
  check_outer_point(scene, x, /*guard_x0=*/true);
  const HelmholtzGreens greens(HelmholtzParams::make(s, scene.D), scene.D);
  const LaplaceCoeffs coeffs = solve_interaction_coeffs_impl(scene, s, greens);
  double u = 0.0;
  if (scene.gamma0 > 0.0) u += scene.gamma0 * greens.eval(x, scene.x0).value;
  for (int j = 0; j < scene.n_holes(); ++j) {
    u -= kTwoPi * scene.nu * coeffs.a_s(j) * greens.eval(x, scene.holes[j].center).value;
  }
  return u;
}

SteadyCoeffs steady_state_coeffs(const Scene& scene) {
  require_holes(scene);
  const int n = scene.n_holes();
  const Eigen::MatrixXd g = build_interaction_matrix(scene, 0.0).entries;
  const double phibar = scene.phi_bar();

  // N balance rows (rank N-1) stacked with the zero-sum constraint:
  //   2 pi nu [ (G a)_j - mean_k (G a)_k ] + a_j / D = phibar - phi_j
  //   sum_j a_j = 0
  Eigen::MatrixXd sys(n + 1, n);
  Eigen::VectorXd rhs(n + 1);
  const Eigen::RowVectorXd colmean = g.colwise().mean();
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      sys(j, i) = kTwoPi * scene.nu * (g(i, j) - colmean(i)) +
                  (i == j ? 1.0 / scene.D : 0.0);
    }
    rhs(j) = phibar - scene.holes[j].phi;
  }
  sys.row(n).setOnes();
  rhs(n) = 0.0;

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  if (!(smin > 0.0) || std::max(smax, 1.0) / smin > 1e12) {
    throw SingularSystem("steady_state_coeffs: augmented system numerically singular");
  }

  SteadyCoeffs out;
  out.phi_bar = phibar;
  out.a = svd.solve(rhs);
  // DeltaGamma from -DG/|Omega| = phibar + (2 pi nu / N) sum_ij a_i G_ij
  const double coupling = (g * out.a).sum();
  out.delta_gamma =
      -scene.domain_area * (phibar + kTwoPi * scene.nu * coupling / n);
  return out;
}

double steady_state(const Scene& scene, const SteadyCoeffs& coeffs, const Vec2& x) {
  require_holes(scene);
  check_outer_point(scene, x, /*guard_x0=*/false);
  const int n = scene.n_holes();
  const Eigen::MatrixXd g = build_interaction_matrix(scene, 0.0).entries;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += coeffs.a(k) * g0(x, scene.holes[k].center, scene.D).value;
  }
  const double coupling = (g * coeffs.a).sum();
  return coeffs.phi_bar - kTwoPi * scene.nu * acc +
         kTwoPi * scene.nu * coupling / n;
}

double steady_state(const Scene& scene, const Vec2& x) {
  return steady_state(scene, steady_state_coeffs(scene), x);
}

SteadyStateField::SteadyStateField(const Scene& scene)
    : scene_(scene), coeffs_(steady_state_coeffs(scene)) {
  const Eigen::MatrixXd g = build_interaction_matrix(scene_, 0.0).entries;
  coupling_term_ = kTwoPi * scene_.nu * (g * coeffs_.a).sum() / scene_.n_holes();
}

double SteadyStateField::operator()(const Vec2& x) const {
  check_outer_point(scene_, x, /*guard_x0=*/false);
  double acc = 0.0;
  for (int k = 0; k < scene_.n_holes(); ++k) {
    acc += coeffs_.a(k) * g0(x, scene_.holes[k].center, scene_.D).value;
  }
  return coeffs_.phi_bar - kTwoPi * scene_.nu * acc + coupling_term_;
}

AccTimeOrder1Field::AccTimeOrder1Field(const Scene& scene) : scene_(scene) {
  require_holes(scene);
  g0mat_ = build_interaction_matrix(scene, 0.0).entries;
  const int n = scene.n_holes();
  const double phibar = scene.phi_bar();
  sum_gg_ = g0mat_.sum();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sum_dphi_gg_ += (phibar - scene.holes[i].phi) * g0mat_(i, j);
    }
  }
  if (scene.gamma0 > 0.0) {
    for (int j = 0; j < n; ++j) {
      sum_g_holes_x0_ += g0(scene.holes[j].center, scene.x0, scene.D).value;
    }
  }
}

double AccTimeOrder1Field::operator()(const Vec2& x) const {
  check_outer_point(scene_, x, /*guard_x0=*/true);
  const Scene& sc = scene_;
  const int n = sc.n_holes();
  const double phibar = sc.phi_bar();
  const double area = sc.domain_area;
  const double lead = (area * phibar - sc.gamma0) /
                      (kTwoPi * sc.nu * n * sc.D * phibar);

  double sum_g_x = 0.0;       // sum_j G0(x, x_j)
  double sum_dphi_g_x = 0.0;  // sum_k (phibar - phi_k) G0(x, x_k)
  for (int j = 0; j < n; ++j) {
    const double g = g0(x, sc.holes[j].center, sc.D).value;
    sum_g_x += g;
    sum_dphi_g_x += (phibar - sc.holes[j].phi) * g;
  }

  double f0 = -(area / (n * static_cast<double>(n))) * sum_dphi_gg_ +
              ((sc.gamma0 - area * phibar) / (n * static_cast<double>(n))) * sum_gg_ -
              ((sc.gamma0 - area * phibar) / n) * sum_g_x;
  if (sc.gamma0 > 0.0) {
    f0 += sc.gamma0 * g0(x, sc.x0, sc.D).value -
          (sc.gamma0 / n) * sum_g_holes_x0_;
  }

  const double bracket = sum_dphi_g_x - sum_dphi_gg_ / n;
  return lead - f0 / phibar +
         ((area * phibar - sc.gamma0) / (n * phibar * phibar)) * bracket;
}

double acc_time_order1(const Scene& scene, const Vec2& x) {
  return AccTimeOrder1Field(scene)(x);
}

AccTimeNonperturbativeField::AccTimeNonperturbativeField(const Scene& scene,
                                                         double s_base)
    : scene_(scene),
      s_base_(s_base),
      steady_(scene),
      greens_hi_(HelmholtzParams::make(s_base, scene.D), scene.D),
      greens_lo_(HelmholtzParams::make(0.5 * s_base, scene.D), scene.D),
      coeffs_hi_(solve_interaction_coeffs_impl(scene, s_base, greens_hi_)),
      coeffs_lo_(solve_interaction_coeffs_impl(scene, 0.5 * s_base, greens_lo_)) {
  if (!(s_base > 0.0)) {
    throw ArgumentOutOfRange("acc_time_nonperturbative requires s_base > 0");
  }
}

double AccTimeNonperturbativeField::f_of_s(const Vec2& x,
                                           const HelmholtzGreens& greens,
                                           const LaplaceCoeffs& coeffs) const {
  double u = 0.0;
  if (scene_.gamma0 > 0.0) u += scene_.gamma0 * greens.eval(x, scene_.x0).value;
  for (int j = 0; j < scene_.n_holes(); ++j) {
    u -= kTwoPi * scene_.nu * coeffs.a_s(j) *
         greens.eval(x, scene_.holes[j].center).value;
  }
  return coeffs.s * u;
}

double AccTimeNonperturbativeField::operator()(const Vec2& x) const {
  check_outer_point(scene_, x, /*guard_x0=*/true);
  const double f0 = steady_(x);
  const double t_hi = (f0 - f_of_s(x, greens_hi_, coeffs_hi_)) / (s_base_ * f0);
  const double t_lo =
      (f0 - f_of_s(x, greens_lo_, coeffs_lo_)) / (0.5 * s_base_ * f0);
  if (std::abs(t_lo - t_hi) > 0.5 * std::abs(t_hi)) {
    throw NonConvergedExtrapolation(
        "accumulation-time s-extrapolation diverging; reduce s_base");
  }
  return 2.0 * t_lo - t_hi;
}

double acc_time_nonperturbative(const Scene& scene, const Vec2& x, double s_base) {
  return AccTimeNonperturbativeField(scene, s_base)(x);
}

}  // namespace acctime
