#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "acctime/asymptotics.hpp"
#include "acctime/errors.hpp"
#include "acctime/greens_disc.hpp"
#include "acctime/scene.hpp"

using namespace acctime;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Scene two_holes_mixed_phi(double nu = 0.1) {
  Scene raw;
  raw.holes = {{{0.2, 0.0}, 1.0, 1.0}, {{-0.2, 0.0}, 1.0, 2.0}};
  raw.nu = nu;
  raw.gamma0 = 0.0;
  return validate_scene(raw);
}

// seeded random scenes with 1..5 holes on a coarse polar lattice so the
// separation constraint always holds
Scene random_scene(std::mt19937& rng) {
  std::uniform_int_distribution<int> un(1, 5);
  std::uniform_real_distribution<double> uphi(0.5, 2.0), ur(0.0, 1.0);
  const int n = un(rng);
  Scene raw;
  raw.nu = 0.1;
  raw.gamma0 = 0.4;  // 0.4/pi < 0.5 <= phi_min
  for (int j = 0; j < n; ++j) {
    const double r = 0.25 + 0.3 * ur(rng);
    const double th = (j + 0.3 * ur(rng)) * kTwoPi / n;
    raw.holes.push_back({polar(r, th), 1.0, uphi(rng)});
  }
  raw.x0 = {0.0, -0.85};
  return validate_scene(raw);
}

// the identical-Phi specialization written out independently
double acc_time_identical_phi(const Scene& sc, const Vec2& x) {
  const int n = sc.n_holes();
  const double phibar = sc.phi_bar();
  const double area = sc.domain_area;
  const Eigen::MatrixXd g = build_interaction_matrix(sc, 0.0).entries;
  double t = (area * phibar - sc.gamma0) / (sc.D * kTwoPi * sc.nu * n * phibar);
  if (sc.gamma0 > 0.0) {
    double mean_g = 0.0;
    for (int j = 0; j < n; ++j) mean_g += g0(sc.holes[j].center, sc.x0, sc.D).value;
    mean_g /= n;
    t -= (sc.gamma0 / phibar) * (g0(x, sc.x0, sc.D).value - mean_g);
  }
  double sum_gx = 0.0;
  for (int j = 0; j < n; ++j) sum_gx += g0(x, sc.holes[j].center, sc.D).value;
  t -= ((area * phibar - sc.gamma0) / (n * phibar)) * (sum_gx - g.sum() / n);
  return t;
}

}  // namespace

TEST_CASE("interaction matrix: single center hole at s=0") {
  const Scene sc = presets::single_center_hole(0.1);
  const InteractionMatrix m = build_interaction_matrix(sc, 0.0);
  CHECK(m.entries.rows() == 1);
  CHECK(m.entries(0, 0) == doctest::Approx(-3.0 / (8.0 * M_PI)).epsilon(1e-14));
}

TEST_CASE("interaction matrix: symmetric pair") {
  const Scene sc = presets::two_holes(0.0);
  const InteractionMatrix m = build_interaction_matrix(sc, 0.0);
  CHECK(m.entries(0, 1) == m.entries(1, 0));
  CHECK(m.entries(0, 1) ==
        doctest::Approx(g0(sc.holes[0].center, sc.holes[1].center, 1.0).value)
            .epsilon(1e-14));
  CHECK(m.entries(0, 0) == doctest::Approx(m.entries(1, 1)).epsilon(1e-14));
}

TEST_CASE("interaction matrix: helmholtz entries are definitional") {
  const Scene sc = presets::two_holes(0.0);
  const InteractionMatrix m = build_interaction_matrix(sc, 1.0);
  const HelmholtzParams p = HelmholtzParams::make(1.0, sc.D);
  CHECK(m.entries(0, 1) ==
        g_helmholtz(sc.holes[0].center, sc.holes[1].center, p, sc.D).value);
  CHECK(m.entries(0, 0) == r_helmholtz_coincident(sc.holes[0].center, p, sc.D));
}

TEST_CASE("laplace coefficients: single-hole closed form") {
  const Scene sc = presets::single_center_hole(0.1);
  const double s = 0.3;
  const LaplaceCoeffs c = solve_interaction_coeffs(sc, s);
  const double r = r_helmholtz_coincident({0.0, 0.0}, HelmholtzParams::make(s, 1.0), 1.0);
  const double expected = -(1.0 / s) / (1.0 + kTwoPi * sc.nu * r);
  CHECK(c.a_s(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("laplace coefficients: residual of the linear system") {
  const Scene sc = presets::two_holes(1.0);
  const double s = 0.01;
  const LaplaceCoeffs c = solve_interaction_coeffs(sc, s);
  const Eigen::MatrixXd g = build_interaction_matrix(sc, s).entries;
  const Eigen::MatrixXd sys =
      Eigen::MatrixXd::Identity(2, 2) + kTwoPi * sc.nu * sc.D * g;
  const Eigen::VectorXd resid = sys * c.a_s + sc.D * c.v_rhs;
  CHECK(resid.norm() <= 1e-10 * (sc.D * c.v_rhs).norm());
}

TEST_CASE("s A(s) tends to the steady coefficients") {
  SUBCASE("identical boundary values: limit vanishes") {
    const Scene sc = presets::two_holes(1.0);
    const Eigen::VectorXd a1 = solve_interaction_coeffs(sc, 1e-2).a_s;
    const Eigen::VectorXd a2 = solve_interaction_coeffs(sc, 1e-3).a_s;
    // linear extrapolation of s*A(s) to s = 0
    for (int j = 0; j < 2; ++j) {
      const double v1 = 1e-2 * a1(j), v2 = 1e-3 * a2(j);
      const double limit = v2 + (v2 - v1) / 9.0;
      CHECK(std::abs(limit) < 5e-4);
    }
  }
  SUBCASE("mixed boundary values: limit matches the steady solve") {
    const Scene sc = two_holes_mixed_phi();
    const SteadyCoeffs steady = steady_state_coeffs(sc);
    const Eigen::VectorXd a1 = solve_interaction_coeffs(sc, 1e-2).a_s;
    const Eigen::VectorXd a2 = solve_interaction_coeffs(sc, 1e-3).a_s;
    for (int j = 0; j < 2; ++j) {
      const double v1 = 1e-2 * a1(j), v2 = 1e-3 * a2(j);
      const double limit = v2 + (v2 - v1) / 9.0;
      CHECK(limit == doctest::Approx(steady.a(j)).epsilon(2e-3));
    }
  }
}

TEST_CASE("outer solution: s u~ approaches the mean boundary value away from holes") {
  const Scene sc = presets::two_holes(1.0);
  const Vec2 x{0.0, -0.6};
  const double su = 1e-3 * outer_solution_laplace(sc, x, 1e-3);
  CHECK(std::abs(su - 1.0) < 5e-3);
}

TEST_CASE("outer solution: no x0 dependence without initial mass") {
  Scene a = presets::two_holes(0.0);
  Scene b = a;
  b.x0 = {0.0, -0.7};
  b = validate_scene(b);
  const Vec2 x{0.5, 0.1};
  CHECK(outer_solution_laplace(a, x, 0.5) == outer_solution_laplace(b, x, 0.5));
}

TEST_CASE("outer solution: matches the hole value near a hole to O(nu)") {
  const Scene sc = presets::single_center_hole(0.1);
  const double s = 1e-2;
  const Vec2 x{5.0 * sc.epsilon, 0.0};
  const double su = s * outer_solution_laplace(sc, x, s);
  CHECK(std::abs(su - sc.holes[0].phi) < sc.nu);
}

TEST_CASE("steady coefficients: identical boundary values give zero") {
  for (int n : {1, 2, 3}) {
    Scene raw;
    for (int j = 0; j < n; ++j) {
      raw.holes.push_back({polar(0.45, j * kTwoPi / n), 1.0, 1.5});
    }
    raw.nu = 0.1;
    const Scene sc = validate_scene(raw);
    const SteadyCoeffs c = steady_state_coeffs(sc);
    for (int j = 0; j < n; ++j) CHECK(c.a(j) == 0.0);
    CHECK(-c.delta_gamma / sc.domain_area == doctest::Approx(1.5).epsilon(1e-14));
  }
}

TEST_CASE("steady coefficients: two holes with mixed phi, reduced by symmetry") {
  const Scene sc = two_holes_mixed_phi();
  const SteadyCoeffs c = steady_state_coeffs(sc);
  CHECK(c.a(0) + c.a(1) == doctest::Approx(0.0).epsilon(1e-14));
  // a1 [1/D + 2 pi nu (R0(x1,x1) - G0(x1,x2))] = phibar - phi1 = 0.5
  const double r0 = r0_coincident(sc.holes[0].center, sc.D);
  const double g01 = g0(sc.holes[0].center, sc.holes[1].center, sc.D).value;
  const double expected = 0.5 / (1.0 / sc.D + kTwoPi * sc.nu * (r0 - g01));
  CHECK(c.a(0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("steady state: identical boundary values give the constant field") {
  const Scene sc = presets::two_holes(1.0);
  const SteadyStateField field(sc);
  for (const Vec2& x : {Vec2{0.0, 0.0}, Vec2{0.6, 0.2}, Vec2{-0.3, -0.7}}) {
    CHECK(field(x) == sc.phi_bar());
  }
}

TEST_CASE("steady state: single hole gives phi everywhere") {
  const Scene sc = presets::single_hole_offset();
  CHECK(steady_state(sc, {0.2, -0.4}) == sc.holes[0].phi);
}

TEST_CASE("steady state: independent of gamma0 and x0") {
  Scene a = two_holes_mixed_phi();
  Scene b = a;
  b.gamma0 = 2.0;
  b.x0 = {0.0, 0.5};
  b = validate_scene(b);
  const Vec2 x{0.3, 0.4};
  CHECK(steady_state(a, x) == steady_state(b, x));
}

TEST_CASE("steady state: both algebraic routes agree") {
  const Scene sc = two_holes_mixed_phi();
  const SteadyCoeffs c = steady_state_coeffs(sc);
  const Vec2 x{0.1, 0.55};
  // route via DeltaGamma: u* = -DG/|Omega| - 2 pi nu sum_k a_k G0(x,x_k)
  double acc = 0.0;
  for (int k = 0; k < sc.n_holes(); ++k) {
    acc += c.a(k) * g0(x, sc.holes[k].center, sc.D).value;
  }
  const double via_dg = -c.delta_gamma / sc.domain_area - kTwoPi * sc.nu * acc;
  CHECK(steady_state(sc, c, x) == doctest::Approx(via_dg).epsilon(1e-14));
}

TEST_CASE("accumulation time: single center hole closed form") {
  // T(r) = 1/(2 nu) + ln(r)/2 - r^2/4 for the unit-phi center hole
  const Scene sc = presets::single_center_hole(0.1);
  CHECK(acc_time_order1(sc, {1.0, 0.0}) == doctest::Approx(4.75).epsilon(1e-12));
  CHECK(acc_time_order1(sc, {0.5, 0.0}) ==
        doctest::Approx(5.0 + 0.5 * std::log(0.5) - 0.0625).epsilon(1e-12));
  CHECK(5.0 + 0.5 * std::log(0.5) - 0.0625 == doctest::Approx(4.59093).epsilon(1e-6));
}

TEST_CASE("accumulation time: leading coefficient as nu -> 0") {
  for (double nu : {0.05, 0.02}) {
    const Scene sc = presets::single_center_hole(nu);
    const double nuT = nu * acc_time_order1(sc, {1.0, 0.0});
    CHECK(std::abs(nuT - 0.5) / 0.5 < 0.03);
  }
}

TEST_CASE("accumulation time: identical-phi path equals the specialization") {
  for (const Scene& sc : {presets::two_holes(1.0), presets::two_holes(0.0),
                          presets::single_hole_offset()}) {
    const AccTimeOrder1Field field(sc);
    for (const Vec2& x : {Vec2{0.0, -0.4}, Vec2{0.62, 0.33}, Vec2{-0.8, 0.1}}) {
      CHECK(field(x) == doctest::Approx(acc_time_identical_phi(sc, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("accumulation time: positivity under the growth condition") {
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 8; ++trial) {
    const Scene sc = random_scene(rng);
    const AccTimeOrder1Field field(sc);
    for (int iy = 0; iy < 50; ++iy) {
      for (int ix = 0; ix < 50; ++ix) {
        const Vec2 p{-0.98 + ix * 0.04, -0.98 + iy * 0.04};
        if (norm(p) >= 1.0) continue;
        bool skip = false;
        for (const auto& h : sc.holes) {
          if (dist(p, h.center) < 0.02) skip = true;
        }
        if (sc.gamma0 > 0.0 && dist(p, sc.x0) < 0.02) skip = true;
        if (skip) continue;
        CHECK(field(p) > 0.0);
      }
    }
  }
}

TEST_CASE("accumulation time: sum of steady coefficients vanishes") {
  std::mt19937 rng(555);
  for (int trial = 0; trial < 12; ++trial) {
    const Scene sc = random_scene(rng);
    const SteadyCoeffs c = steady_state_coeffs(sc);
    CHECK(std::abs(c.a.sum()) <= 1e-12 * (1.0 + c.a.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("nonperturbative time agrees with the order-1 expansion") {
  const Vec2 x{0.75, 0.0};
  const double gap01 = std::abs(acc_time_nonperturbative(presets::single_center_hole(0.1), x) -
                                acc_time_order1(presets::single_center_hole(0.1), x));
  CHECK(gap01 <= 0.5);
  // for a single hole the resummed time has no O(nu) correction at all:
  // once the s-extrapolation is converged the two routes coincide
  const double tight = std::abs(acc_time_nonperturbative(presets::single_center_hole(0.1), x, 1e-4) -
                                acc_time_order1(presets::single_center_hole(0.1), x));
  CHECK(tight <= 1e-5);
}

TEST_CASE("nonperturbative-vs-order-1 gap shrinks linearly in nu") {
  // mixed boundary values carry a genuine O(nu) difference; evaluate with
  // the s-extrapolation converged far below it
  auto gap = [](double nu) {
    Scene raw;
    raw.holes = {{{0.3, 0.0}, 1.0, 1.0}, {{-0.3, 0.0}, 1.0, 2.0}};
    raw.nu = nu;
    const Scene sc = validate_scene(raw);
    const Vec2 x{0.45, 0.35};
    return std::abs(acc_time_nonperturbative(sc, x, 1e-4) - acc_time_order1(sc, x));
  };
  const double g01 = gap(0.1);
  const double g005 = gap(0.05);
  CHECK(g005 / g01 == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("nonperturbative time: mirror symmetry of the symmetric pair") {
  const Scene sc = presets::two_holes(0.0);
  const AccTimeNonperturbativeField field(sc);
  for (const Vec2& x : {Vec2{0.45, 0.3}, Vec2{0.6, -0.2}, Vec2{0.15, 0.7}}) {
    CHECK(field(x) == doctest::Approx(field({-x.x, x.y})).epsilon(1e-8));
  }
}

TEST_CASE("nonperturbative time: s-extrapolation is converged") {
  const Scene sc = presets::two_holes(1.0);
  const Vec2 x{0.4, -0.5};
  const double t1 = acc_time_nonperturbative(sc, x, 1e-2);
  const double t2 = acc_time_nonperturbative(sc, x, 5e-3);
  CHECK(std::abs(t2 - t1) <= 1e-3 * std::abs(t1));
}

TEST_CASE("steady state is flat at O(nu) while T varies at O(1)") {
  // ratio of spatial standard deviations must scale like nu
  auto std_ratio = [](double nu) {
    Scene raw;
    raw.holes = {{{0.3, 0.0}, 1.0, 1.0}, {{-0.3, 0.0}, 1.0, 2.0}};
    raw.nu = nu;
    raw.gamma0 = 1.0;
    raw.x0 = {0.0, 0.4};
    const Scene sc = validate_scene(raw);
    const SteadyStateField ustar(sc);
    const AccTimeOrder1Field tfield(sc);
    std::vector<double> us, ts;
    for (int iy = 0; iy < 50; ++iy) {
      for (int ix = 0; ix < 50; ++ix) {
        const Vec2 p{-0.98 + ix * 0.04, -0.98 + iy * 0.04};
        if (norm(p) >= 0.99) continue;
        bool skip = dist(p, sc.x0) < 0.05;
        for (const auto& h : sc.holes) skip = skip || dist(p, h.center) < 0.05;
        if (skip) continue;
        us.push_back(ustar(p));
        ts.push_back(tfield(p));
      }
    }
    auto sd = [](const std::vector<double>& v) {
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= v.size();
      double acc = 0.0;
      for (double x : v) acc += (x - mean) * (x - mean);
      return std::sqrt(acc / v.size());
    };
    return sd(us) / sd(ts);
  };
  const double r01 = std_ratio(0.1);
  const double r005 = std_ratio(0.05);
  CHECK(r01 <= 5.0 * 0.1);
  CHECK(r005 <= 5.0 * 0.05);
  CHECK(r005 / r01 == doctest::Approx(0.5).epsilon(0.35));
}

TEST_CASE("accumulation time depends on the initial data") {
  Scene lo = presets::two_holes(0.5);
  Scene hi = presets::two_holes(0.7);
  const Vec2 x{0.3, 0.3};
  const double dT = acc_time_order1(hi, x) - acc_time_order1(lo, x);
  CHECK(std::abs(dT) > 1e-3);
}

TEST_CASE("outer-point guards") {
  const Scene sc = presets::single_hole_offset();
  CHECK_THROWS_AS(acc_time_order1(sc, sc.x0), EvaluationAtSingularPoint);
  CHECK_THROWS_AS(acc_time_order1(sc, sc.holes[0].center), EvaluationInsideHole);
  CHECK_THROWS_AS(steady_state(sc, {2.0, 0.0}), EvaluationInsideHole);
  Scene nogamma = presets::two_holes(0.0);
  CHECK_NOTHROW(acc_time_order1(nogamma, nogamma.x0));  // x0 inert when gamma0 = 0
}

TEST_CASE("empty scene is rejected by the asymptotic operations") {
  Scene raw;
  raw.nu = 0.1;
  const Scene sc = validate_scene(raw);
  CHECK_THROWS_AS(steady_state_coeffs(sc), NonpositiveParameter);
  CHECK_THROWS_AS(build_interaction_matrix(sc, 0.0), NonpositiveParameter);
}

TEST_CASE("offset single hole against the explicit closed form") {
  // T(x) = (pi - g)/(2 pi nu D) - g [G0(x,x0) - G0(x1,x0)]
  //        - (pi - g) [G0(x,x1) - R0(x1,x1)]   for phi = 1, g = gamma0
  const Scene sc = presets::single_hole_offset();
  const Vec2 x1 = sc.holes[0].center;
  const AccTimeOrder1Field field(sc);
  for (const Vec2& x : {Vec2{0.0, -0.5}, Vec2{-0.62, 0.13}, Vec2{0.21, 0.7}}) {
    const double g = sc.gamma0;
    const double expected =
        (M_PI - g) / (kTwoPi * sc.nu * sc.D) -
        g * (g0(x, sc.x0, sc.D).value - g0(x1, sc.x0, sc.D).value) -
        (M_PI - g) * (g0(x, x1, sc.D).value - r0_coincident(x1, sc.D));
    CHECK(field(x) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("symmetric pair against the explicit closed form") {
  // T(x) = (pi - g)/(4 pi nu D)
  //        - g [G0(x,x0) - (G0(x1,x0) + G0(x2,x0))/2]
  //        - ((pi - g)/2) { G0(x,x1) + G0(x,x2)
  //            - [R0(x1,x1) + R0(x2,x2) + G0(x1,x2) + G0(x2,x1)]/2 }
  const Scene sc = presets::two_holes(1.0);
  const Vec2 x1 = sc.holes[0].center, x2 = sc.holes[1].center;
  const AccTimeOrder1Field field(sc);
  for (const Vec2& x : {Vec2{0.55, 0.0}, Vec2{0.0, -0.62}, Vec2{-0.33, 0.21}}) {
    const double g = sc.gamma0;
    const double expected =
        (M_PI - g) / (2.0 * kTwoPi * sc.nu * sc.D) -
        g * (g0(x, sc.x0, sc.D).value -
             0.5 * (g0(x1, sc.x0, sc.D).value + g0(x2, sc.x0, sc.D).value)) -
        0.5 * (M_PI - g) *
            (g0(x, x1, sc.D).value + g0(x, x2, sc.D).value -
             0.5 * (r0_coincident(x1, sc.D) + r0_coincident(x2, sc.D) +
                    2.0 * g0(x1, x2, sc.D).value));
    CHECK(field(x) == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("interaction solve detects the degenerate gauge") {
  // at nu* = -1/(2 pi D R(s)) the scalar matching equation cancels the
  // identity; the solver must refuse rather than amplify noise
  const double s = 100.0;
  const double r = r_helmholtz_coincident({0.0, 0.0}, HelmholtzParams::make(s, 1.0), 1.0);
  REQUIRE(r < 0.0);
  Scene raw;
  raw.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  raw.nu = -1.0 / (kTwoPi * r);
  raw.separation_min = 0.1;
  const Scene sc = validate_scene(raw);
  CHECK_THROWS_AS(solve_interaction_coeffs(sc, s), SingularSystem);
  // slightly away from the degenerate gauge the solve goes through
  Scene ok_raw = raw;
  ok_raw.nu = 0.5 * raw.nu;
  CHECK_NOTHROW(solve_interaction_coeffs(validate_scene(ok_raw), s));
}

TEST_CASE("oversized s_base is rejected by the extrapolation guard") {
  const Scene sc = presets::single_center_hole(0.1);
  CHECK_THROWS_AS(acc_time_nonperturbative(sc, {0.75, 0.0}, 50.0),
                  NonConvergedExtrapolation);
}
