#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "acctime/errors.hpp"
#include "acctime/scene.hpp"

using namespace acctime;

TEST_CASE("nu/epsilon conversions") {
  CHECK(nu_from_epsilon(0.1) == doctest::Approx(0.4342944819).epsilon(1e-10));
  CHECK(epsilon_from_nu(0.1) == doctest::Approx(4.53999297e-5).epsilon(1e-8));
  for (double eps : {0.3, 0.05, 1e-4}) {
    CHECK(epsilon_from_nu(nu_from_epsilon(eps)) == doctest::Approx(eps).epsilon(1e-14));
  }
  CHECK_THROWS_AS(nu_from_epsilon(0.0), NonpositiveParameter);
  CHECK_THROWS_AS(nu_from_epsilon(1.0), NonpositiveParameter);
  CHECK_THROWS_AS(epsilon_from_nu(-0.2), NonpositiveParameter);
}

TEST_CASE("validate_scene accepts the basic single-hole configuration") {
  Scene raw;
  raw.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  raw.nu = 0.1;
  raw.gamma0 = 1.0;  // 1/pi < 1, growth condition holds
  raw.x0 = {0.5, 0.0};
  const Scene s = validate_scene(raw);
  CHECK(s.epsilon == doctest::Approx(std::exp(-10.0)).epsilon(1e-14));
  CHECK(s.separation_min == doctest::Approx(10.0 * s.epsilon));
  CHECK_FALSE(s.overshoot_warning);
}

TEST_CASE("validate_scene is idempotent") {
  Scene raw;
  raw.holes = {{{0.3, -0.2}, 1.0, 2.0}, {{-0.4, 0.1}, 1.0, 1.5}};
  raw.epsilon = 0.01;
  raw.gamma0 = 2.0;
  raw.x0 = {0.0, -0.6};
  const Scene once = validate_scene(raw);
  const Scene twice = validate_scene(once);
  CHECK(once.nu == twice.nu);
  CHECK(once.epsilon == twice.epsilon);
  CHECK(once.separation_min == twice.separation_min);
  CHECK(scene_hash(once) == scene_hash(twice));
}

TEST_CASE("hole outside the domain is rejected") {
  Scene raw;
  raw.holes = {{{0.99, 0.0}, 1.0, 1.0}};
  raw.epsilon = 0.05;
  CHECK_THROWS_AS(validate_scene(raw), HoleOutsideDomain);
}

TEST_CASE("growth condition") {
  Scene raw;
  raw.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  raw.nu = 0.1;
  raw.gamma0 = 4.0;  // 4/pi > 1
  raw.x0 = {0.5, 0.0};
  CHECK_THROWS_AS(validate_scene(raw), GrowthConditionViolated);
  raw.allow_overshoot = true;
  const Scene s = validate_scene(raw);
  CHECK(s.overshoot_warning);
}

TEST_CASE("separation threshold") {
  Scene raw;
  raw.holes = {{{0.2, 0.0}, 1.0, 1.0}, {{0.2 + 1e-4, 0.0}, 1.0, 1.0}};
  raw.nu = 0.1;  // separation_min = 10 exp(-10) ~ 4.5e-4
  CHECK_THROWS_AS(validate_scene(raw), HolesOverlapping);
  raw.separation_min = 1e-5;
  CHECK_NOTHROW(validate_scene(raw));
}

TEST_CASE("parameter guards") {
  Scene raw;
  raw.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  SUBCASE("missing nu and epsilon") {
    CHECK_THROWS_AS(validate_scene(raw), NonpositiveParameter);
  }
  SUBCASE("nonpositive D") {
    raw.nu = 0.1;
    raw.D = 0.0;
    CHECK_THROWS_AS(validate_scene(raw), NonpositiveParameter);
  }
  SUBCASE("nonpositive phi") {
    raw.nu = 0.1;
    raw.holes[0].phi = -1.0;
    CHECK_THROWS_AS(validate_scene(raw), NonpositiveParameter);
  }
  SUBCASE("radius_scale other than 1 is rejected") {
    raw.nu = 0.1;
    raw.holes[0].radius_scale = 2.0;
    CHECK_THROWS_AS(validate_scene(raw), NonpositiveParameter);
  }
  SUBCASE("inconsistent nu and epsilon") {
    raw.nu = 0.1;
    raw.epsilon = 0.1;
    CHECK_THROWS_AS(validate_scene(raw), NonpositiveParameter);
  }
}

TEST_CASE("scene JSON round trip") {
  const Scene s = presets::two_holes(1.0);
  const Scene back = scene_from_json_string(scene_to_json_string(s));
  CHECK(back.nu == s.nu);
  CHECK(back.epsilon == s.epsilon);
  CHECK(back.gamma0 == s.gamma0);
  CHECK(back.n_holes() == 2);
  CHECK(back.holes[1].center.x == s.holes[1].center.x);
  CHECK(scene_hash(back) == scene_hash(s));
}

TEST_CASE("scene JSON rejects unknown keys and malformed points") {
  CHECK_THROWS_AS(scene_from_json_string(R"({"nu":0.1,"holse":[]})"),
                  NonpositiveParameter);
  CHECK_THROWS_AS(
      scene_from_json_string(R"({"nu":0.1,"x0":[1,2,3],"holes":[]})"),
      NonpositiveParameter);
}

TEST_CASE("scene JSON accepts either nu or epsilon") {
  const char* with_eps = R"({"epsilon": 0.05, "gamma0": 0.0,
    "holes": [{"center": [0,0], "phi": 1.0}]})";
  const Scene s = scene_from_json_string(with_eps);
  CHECK(s.nu == doctest::Approx(-1.0 / std::log(0.05)).epsilon(1e-14));
}

TEST_CASE("scene hash is stable and sensitive") {
  const Scene a = presets::two_holes(0.0);
  const Scene b = presets::two_holes(1.0);
  CHECK(scene_hash(a) == scene_hash(presets::two_holes(0.0)));
  CHECK(scene_hash(a) != scene_hash(b));
}

TEST_CASE("x0 separation only matters when mass is present") {
  Scene raw;
  raw.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  raw.epsilon = 0.1;  // separation_min = 1.0: no x0 inside the disc can satisfy it
  raw.gamma0 = 0.0;
  raw.x0 = {0.5, 0.0};
  CHECK_NOTHROW(validate_scene(raw));
  raw.gamma0 = 1.0;
  CHECK_THROWS_AS(validate_scene(raw), HolesOverlapping);
}

TEST_CASE("custom separation threshold survives the JSON round trip") {
  Scene raw;
  raw.holes = {{{0.2, 0.0}, 1.0, 1.0}, {{0.21, 0.0}, 1.0, 1.0}};
  raw.nu = 0.1;
  raw.separation_min = 1e-3;
  const Scene s = validate_scene(raw);
  const Scene back = scene_from_json_string(scene_to_json_string(s));
  CHECK(back.separation_min == s.separation_min);
}
