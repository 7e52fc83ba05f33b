#pragma once

#include <limits>
#include <string>
#include <vector>

#include "acctime/geometry.hpp"

namespace acctime {

// A small disc-shaped hole of radius eps*radius_scale held at a fixed
// concentration phi. radius_scale is kept for forward compatibility but
// must currently equal 1.
struct Hole {
  Vec2 center;
  double radius_scale = 1.0;
  double phi = 1.0;
};

inline constexpr double kDomainArea = M_PI;  // unit disc

// Problem instance: unit disc perforated by small Dirichlet holes,
// diffusivity D, point initial condition gamma0 * delta(x - x0).
//
// Exactly one of nu/epsilon needs to be supplied before validation
// (set the other to NaN); validate_scene derives the missing one via
// nu = -1/ln(eps). Instances returned by validate_scene are treated
// as immutable and are safe to share across threads.
struct Scene {
  std::vector<Hole> holes;
  double D = 1.0;
  double nu = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double gamma0 = 0.0;
  Vec2 x0;
  double domain_area = kDomainArea;
  // minimum allowed pairwise/boundary separation; NaN selects the
  // default 10*epsilon
  double separation_min = std::numeric_limits<double>::quiet_NaN();
  bool allow_overshoot = false;
  // set by validate_scene when the growth condition is violated but
  // allow_overshoot permits the scene anyway (T may be negative)
  bool overshoot_warning = false;

  int n_holes() const { return static_cast<int>(holes.size()); }
  double phi_min() const;
  double phi_bar() const;
};

double nu_from_epsilon(double eps);
double epsilon_from_nu(double nu);

// Checks all invariants and returns the scene with both nu and epsilon
// populated. Idempotent. Throws NonpositiveParameter, HoleOutsideDomain,
// HolesOverlapping or GrowthConditionViolated.
Scene validate_scene(const Scene& raw);

// JSON scene file format:
//   { "D": 1.0, "nu": 0.1, "gamma0": 1.0, "x0": [0.5, 0.0],
//     "holes": [ {"center": [0.0, 0.0], "phi": 1.0} ],
//     "allow_overshoot": false }
// "epsilon" may be given instead of "nu". The scene is validated before
// being returned.
Scene scene_from_json_string(const std::string& text);
Scene scene_from_json_file(const std::string& path);
std::string scene_to_json_string(const Scene& scene);

// Parse without validating (callers that apply overrides re-validate).
Scene parse_scene_json(const std::string& text);

// FNV-1a hash of the canonical JSON serialization, as a hex string.
// Embedded in every emitted artifact.
std::string scene_hash(const Scene& scene);

// Scenes for the example configurations discussed in the docs: a single
// off-center hole with an off-axis initial point mass, its rotated
// variant, the symmetric two-hole pair with and without initial mass,
// and grid-resolvable single-hole scenes for the finite-difference
// oracle.
namespace presets {
Scene single_hole_offset();        // hole at 0.5*(cos pi/6, sin pi/6), x0=(0.5,0), nu=0.1, gamma0=1
Scene single_hole_rotated();       // hole at 0.5*(cos 4pi/3, sin 4pi/3), x0=(0.1,0), nu=0.1, gamma0=1
Scene two_holes(double gamma0);    // holes at (+-0.2, 0), x0=(0,0.5), nu=0.1
Scene oracle_single(double eps);   // center hole, gamma0=0, epsilon given
Scene single_center_hole(double nu);  // hole at origin, phi=1, gamma0=0
}  // namespace presets

}  // namespace acctime
