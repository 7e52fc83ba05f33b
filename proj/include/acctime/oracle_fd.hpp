#pragma once

#include <cstdint>
#include <vector>

#include "acctime/field_grid.hpp"
#include "acctime/geometry.hpp"
#include "acctime/scene.hpp"

namespace acctime {

enum class NodeClass : std::uint8_t {
  kExterior = 0,      // outside the unit disc
  kInterior = 1,      // inside the disc, outside every hole
  kHoleDirichlet = 2  // within epsilon of some hole center
};

// Uniform lattice over [-1,1]^2 with nodes classified against the scene.
// The discrete Laplacian is the masked graph Laplacian: links to exterior
// nodes are dropped (staircase Neumann), links to hole nodes carry the
// Dirichlet data. Symmetric, so CG applies.
struct MaskedGrid {
  double h = 0.0;
  int n = 0;  // nodes per side, n = 2/h + 1
  std::vector<NodeClass> node_class;    // size n*n, index iy*n + ix
  std::vector<std::int16_t> hole_index; // -1 unless hole-Dirichlet
  std::vector<std::int32_t> compact;    // lattice -> interior index, -1 otherwise
  std::vector<std::int32_t> nodes;      // interior lattice indices

  double coord(int i) const { return -1.0 + h * i; }
  int n_interior() const { return static_cast<int>(nodes.size()); }
};

// Laplace-space solution on the interior nodes of a MaskedGrid.
struct OracleField {
  std::vector<double> values;  // size grid.n_interior()
  double s = 0.0;
  double residual_norm = 0.0;             // final relative CG residual
  int iterations = 0;
  std::vector<double> residual_history;   // relative residuals per iteration
};

// Requires h <= epsilon/3 so each hole spans at least three cells across
// its radius; throws HoleUnresolved otherwise.
MaskedGrid build_grid(const Scene& scene, double h);

// Solves D lap u - s u = -Gamma0 delta(x - x0) with reflecting staircase
// outer boundary. s > 0: hole nodes carry Phi_j/s and the point source is
// Gamma0/h^2 at the node nearest x0. s = 0: steady mode, hole nodes carry
// Phi_j and there is no source. Matrix-free conjugate-residual iteration
// (the minimal-residual CG variant, so the residual history decreases
// monotonically) to relative residual `tol`.
OracleField solve_modified_helmholtz_fd(const MaskedGrid& grid, const Scene& scene,
                                        double s, double tol = 1e-10,
                                        int max_iterations = 100000);

// Accumulation time on the grid:
//   T = (u* - s u~(s)) / (s u*) at s_base and s_base/2, Richardson
// extrapolated; u* from the steady mode. Returned as a FieldGrid on the
// same lattice (NaN outside the interior).
FieldGrid acc_time_fd(const Scene& scene, double h, double s_base = 1e-2);

// Converts a solved field to a FieldGrid (hole nodes carry their
// Dirichlet data, exterior nodes NaN).
FieldGrid oracle_to_field(const MaskedGrid& grid, const Scene& scene,
                          const OracleField& field, const std::string& name);

struct Exclusion {
  Vec2 center;
  double radius = 0.0;
};

// Pointwise-relative error report over nodes that are unmasked in both
// fields and outside every exclusion disc.
struct FieldErrorReport {
  double linf_rel = 0.0;
  double l2_rel = 0.0;
  Vec2 max_location;
  long n_compared = 0;
};

FieldErrorReport compare_fields(const FieldGrid& a, const FieldGrid& b,
                                const std::vector<Exclusion>& exclusions);

}  // namespace acctime
