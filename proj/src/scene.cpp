#include "acctime/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "acctime/errors.hpp"

namespace acctime {

namespace {

bool is_given(double v) { return !std::isnan(v); }

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw NonpositiveParameter(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

double Scene::phi_min() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& h : holes) m = std::min(m, h.phi);
  return m;
}

double Scene::phi_bar() const {
  double s = 0.0;
  for (const auto& h : holes) s += h.phi;
  return holes.empty() ? 0.0 : s / static_cast<double>(holes.size());
}

double nu_from_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) {
    throw NonpositiveParameter("epsilon must lie in (0,1)");
  }
  return -1.0 / std::log(eps);
}

double epsilon_from_nu(double nu) {
  if (!(nu > 0.0 && nu < 1.0)) {
    throw NonpositiveParameter("nu must lie in (0,1)");
  }
  return std::exp(-1.0 / nu);
}

Scene validate_scene(const Scene& raw) {
  Scene s = raw;

  const bool have_nu = is_given(s.nu);
  const bool have_eps = is_given(s.epsilon);
  if (!have_nu && !have_eps) {
    throw NonpositiveParameter("one of nu or epsilon must be given");
  }
  if (have_nu && !have_eps) {
    s.epsilon = epsilon_from_nu(s.nu);
  } else if (have_eps && !have_nu) {
    s.nu = nu_from_epsilon(s.epsilon);
  } else {
    // both given (e.g. re-validating): they must agree to machine precision
    const double eps_of_nu = epsilon_from_nu(s.nu);
    if (std::abs(eps_of_nu - s.epsilon) > 1e-12 * s.epsilon) {
      throw NonpositiveParameter("nu and epsilon are inconsistent: nu implies epsilon=" +
                                 std::to_string(eps_of_nu));
    }
  }
  require_positive(s.nu, "nu");
  require_positive(s.epsilon, "epsilon");
  require_positive(s.D, "D");
  if (s.gamma0 < 0.0 || !std::isfinite(s.gamma0)) {
    throw NonpositiveParameter("gamma0 must be nonnegative and finite");
  }
  if (s.domain_area != kDomainArea) {
    throw NonpositiveParameter("domain is fixed to the unit disc (area pi)");
  }

  if (!is_given(s.separation_min)) s.separation_min = 10.0 * s.epsilon;
  if (s.separation_min < 0.0) {
    throw NonpositiveParameter("separation_min must be nonnegative");
  }

  for (std::size_t j = 0; j < s.holes.size(); ++j) {
    const Hole& h = s.holes[j];
    if (h.phi <= 0.0 || !std::isfinite(h.phi)) {
      throw NonpositiveParameter("hole " + std::to_string(j) + ": phi must be positive");
    }
    if (h.radius_scale != 1.0) {
      throw NonpositiveParameter("hole " + std::to_string(j) +
                                 ": radius_scale must equal 1");
    }
    if (!(norm(h.center) + s.epsilon < 1.0)) {
      throw HoleOutsideDomain("hole " + std::to_string(j) +
                              " is not strictly inside the unit disc");
    }
    if (1.0 - norm(h.center) < s.separation_min) {
      throw HoleOutsideDomain("hole " + std::to_string(j) +
                              " is closer than separation_min to the boundary");
    }
  }
  for (std::size_t i = 0; i < s.holes.size(); ++i) {
    for (std::size_t j = i + 1; j < s.holes.size(); ++j) {
      if (dist(s.holes[i].center, s.holes[j].center) < s.separation_min) {
        throw HolesOverlapping("holes " + std::to_string(i) + " and " +
                               std::to_string(j) + " violate the separation threshold");
      }
    }
  }
  // the initial point mass only exists when gamma0 > 0
  if (s.gamma0 > 0.0) {
    if (!(norm(s.x0) < 1.0)) {
      throw HoleOutsideDomain("x0 must lie inside the unit disc");
    }
    for (std::size_t j = 0; j < s.holes.size(); ++j) {
      if (dist(s.x0, s.holes[j].center) < s.separation_min) {
        throw HolesOverlapping("x0 violates the separation threshold to hole " +
                               std::to_string(j));
      }
    }
  }

  s.overshoot_warning = false;
  if (!s.holes.empty() && s.gamma0 / s.domain_area >= s.phi_min()) {
    if (!s.allow_overshoot) {
      std::ostringstream msg;
      msg << "growth condition violated: gamma0/|Omega| = "
          << s.gamma0 / s.domain_area << " >= min phi = " << s.phi_min()
          << " (accumulation time may be negative; pass allow_overshoot to proceed)";
      throw GrowthConditionViolated(msg.str());
    }
    s.overshoot_warning = true;
  }
  return s;
}

namespace {

nlohmann::json scene_to_json(const Scene& s) {
  nlohmann::json j;
  j["D"] = s.D;
  j["nu"] = s.nu;
  j["epsilon"] = s.epsilon;
  j["gamma0"] = s.gamma0;
  j["x0"] = {s.x0.x, s.x0.y};
  j["holes"] = nlohmann::json::array();
  for (const auto& h : s.holes) {
    j["holes"].push_back({{"center", {h.center.x, h.center.y}}, {"phi", h.phi}});
  }
  if (!std::isnan(s.separation_min)) j["separation_min"] = s.separation_min;
  if (s.allow_overshoot) j["allow_overshoot"] = true;
  return j;
}

Vec2 parse_point(const nlohmann::json& j, const char* name) {
  if (!j.is_array() || j.size() != 2) {
    throw NonpositiveParameter(std::string(name) + " must be a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

Scene parse_scene_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw NonpositiveParameter(std::string("scene JSON parse error: ") + e.what());
  }
  static const char* known[] = {"D",  "nu",    "epsilon",        "gamma0",
                                "x0", "holes", "allow_overshoot", "separation_min"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(std::begin(known), std::end(known),
                     [&](const char* k) { return it.key() == k; }) == std::end(known)) {
      throw NonpositiveParameter("unknown scene key: " + it.key());
    }
  }
  Scene s;
  if (j.contains("D")) s.D = j["D"].get<double>();
  if (j.contains("nu")) s.nu = j["nu"].get<double>();
  if (j.contains("epsilon")) s.epsilon = j["epsilon"].get<double>();
  if (j.contains("gamma0")) s.gamma0 = j["gamma0"].get<double>();
  if (j.contains("x0")) s.x0 = parse_point(j["x0"], "x0");
  if (j.contains("separation_min")) s.separation_min = j["separation_min"].get<double>();
  if (j.contains("allow_overshoot")) s.allow_overshoot = j["allow_overshoot"].get<bool>();
  if (j.contains("holes")) {
    for (const auto& hj : j["holes"]) {
      Hole h;
      h.center = parse_point(hj.at("center"), "hole center");
      h.phi = hj.at("phi").get<double>();
      if (hj.contains("radius_scale")) h.radius_scale = hj["radius_scale"].get<double>();
      s.holes.push_back(h);
    }
  }
  return s;
}

Scene scene_from_json_string(const std::string& text) {
  return validate_scene(parse_scene_json(text));
}

Scene scene_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw NonpositiveParameter("cannot open scene file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return scene_from_json_string(ss.str());
}

std::string scene_to_json_string(const Scene& scene) {
  return scene_to_json(scene).dump(2);
}

std::string scene_hash(const Scene& scene) {
  // canonical serialization: nlohmann::json orders keys lexicographically
  const std::string text = scene_to_json(scene).dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

namespace presets {

Scene single_hole_offset() {
  Scene s;
  s.holes = {{polar(0.5, M_PI / 6.0), 1.0, 1.0}};
  s.nu = 0.1;
  s.gamma0 = 1.0;
  s.x0 = {0.5, 0.0};
  return validate_scene(s);
}

Scene single_hole_rotated() {
  Scene s;
  s.holes = {{polar(0.5, 4.0 * M_PI / 3.0), 1.0, 1.0}};
  s.nu = 0.1;
  s.gamma0 = 1.0;
  s.x0 = {0.1, 0.0};
  return validate_scene(s);
}

Scene two_holes(double gamma0) {
  Scene s;
  s.holes = {{{0.2, 0.0}, 1.0, 1.0}, {{-0.2, 0.0}, 1.0, 1.0}};
  s.nu = 0.1;
  s.gamma0 = gamma0;
  s.x0 = {0.0, 0.5};
  return validate_scene(s);
}

Scene oracle_single(double eps) {
  Scene s;
  s.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  s.epsilon = eps;
  s.gamma0 = 0.0;
  s.x0 = {0.5, 0.0};
  return validate_scene(s);
}

Scene single_center_hole(double nu) {
  Scene s;
  s.holes = {{{0.0, 0.0}, 1.0, 1.0}};
  s.nu = nu;
  s.gamma0 = 0.0;
  s.x0 = {0.5, 0.0};
  return validate_scene(s);
}

}  // namespace presets

}  // namespace acctime
