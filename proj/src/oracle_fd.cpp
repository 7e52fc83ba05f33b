#include "acctime/oracle_fd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acctime/errors.hpp"

namespace acctime {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Dirichlet value carried by hole j at Laplace variable s.
double hole_value(const Scene& scene, int j, double s) {
  return s > 0.0 ? scene.holes[j].phi / s : scene.holes[j].phi;
}

struct Stencil {
  // offsets of the 4 lattice neighbors
  static constexpr int kDx[4] = {1, -1, 0, 0};
  static constexpr int kDy[4] = {0, 0, 1, -1};
};

}  // namespace

MaskedGrid build_grid(const Scene& scene, double h) {
  if (!(h > 0.0)) throw ArgumentOutOfRange("build_grid requires h > 0");
  if (!scene.holes.empty() && h > scene.epsilon / 3.0) {
    throw HoleUnresolved("h = " + std::to_string(h) +
                         " does not resolve holes of radius " +
                         std::to_string(scene.epsilon) + " (need h <= epsilon/3)");
  }
  MaskedGrid grid;
  grid.h = h;
  grid.n = static_cast<int>(std::lround(2.0 / h)) + 1;
  const int n = grid.n;
  grid.node_class.assign(static_cast<std::size_t>(n) * n, NodeClass::kExterior);
  grid.hole_index.assign(static_cast<std::size_t>(n) * n, -1);
  grid.compact.assign(static_cast<std::size_t>(n) * n, -1);

  for (int iy = 0; iy < n; ++iy) {
    const double y = grid.coord(iy);
    for (int ix = 0; ix < n; ++ix) {
      const double x = grid.coord(ix);
      const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
      if (x * x + y * y >= 1.0) continue;
      grid.node_class[idx] = NodeClass::kInterior;
      for (int j = 0; j < scene.n_holes(); ++j) {
        if (dist({x, y}, scene.holes[j].center) <= scene.epsilon) {
          grid.node_class[idx] = NodeClass::kHoleDirichlet;
          grid.hole_index[idx] = static_cast<std::int16_t>(j);
          break;
        }
      }
      if (grid.node_class[idx] == NodeClass::kInterior) {
        grid.compact[idx] = static_cast<std::int32_t>(grid.nodes.size());
        grid.nodes.push_back(static_cast<std::int32_t>(idx));
      }
    }
  }
  return grid;
}

namespace {

// (A u)_k = [deg_k u_k - sum_{interior nbr} u_nbr] / h^2 + (s/D) u_k,
// where deg counts interior and hole neighbors (exterior links dropped).
class MaskedOperator {
 public:
  MaskedOperator(const MaskedGrid& grid, double s_over_d)
      : grid_(grid), s_over_d_(s_over_d), inv_h2_(1.0 / (grid.h * grid.h)) {
    const int n = grid_.n;
    deg_.resize(grid_.n_interior());
    nbrs_.resize(static_cast<std::size_t>(grid_.n_interior()) * 4, -1);
    for (int k = 0; k < grid_.n_interior(); ++k) {
      const int idx = grid_.nodes[k];
      const int ix = idx % n, iy = idx / n;
      int deg = 0;
      for (int d = 0; d < 4; ++d) {
        const int jx = ix + Stencil::kDx[d], jy = iy + Stencil::kDy[d];
        if (jx < 0 || jx >= n || jy < 0 || jy >= n) continue;
        const std::size_t jdx = static_cast<std::size_t>(jy) * n + jx;
        if (grid_.node_class[jdx] == NodeClass::kExterior) continue;
        ++deg;
        if (grid_.node_class[jdx] == NodeClass::kInterior) {
          nbrs_[static_cast<std::size_t>(k) * 4 + d] = grid_.compact[jdx];
        }
      }
      deg_[k] = deg;
    }
  }

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    const int m = grid_.n_interior();
    for (int k = 0; k < m; ++k) {
      double acc = deg_[k] * u[k];
      for (int d = 0; d < 4; ++d) {
        const std::int32_t j = nbrs_[static_cast<std::size_t>(k) * 4 + d];
        if (j >= 0) acc -= u[j];
      }
      out[k] = acc * inv_h2_ + s_over_d_ * u[k];
    }
  }

 private:
  const MaskedGrid& grid_;
  double s_over_d_;
  double inv_h2_;
  std::vector<int> deg_;
  std::vector<std::int32_t> nbrs_;
};

}  // namespace

OracleField solve_modified_helmholtz_fd(const MaskedGrid& grid, const Scene& scene,
                                        double s, double tol, int max_iterations) {
  if (s < 0.0) throw ArgumentOutOfRange("solve requires s >= 0");
  if (s == 0.0 && scene.holes.empty()) {
    throw ArgumentOutOfRange("steady mode needs at least one hole");
  }
  const int n = grid.n;
  const int m = grid.n_interior();
  const double h2 = grid.h * grid.h;

  std::vector<double> b(m, 0.0);
  for (int k = 0; k < m; ++k) {
    const int idx = grid.nodes[k];
    const int ix = idx % n, iy = idx / n;
    for (int d = 0; d < 4; ++d) {
      const int jx = ix + Stencil::kDx[d], jy = iy + Stencil::kDy[d];
      if (jx < 0 || jx >= n || jy < 0 || jy >= n) continue;
      const std::size_t jdx = static_cast<std::size_t>(jy) * n + jx;
      if (grid.node_class[jdx] == NodeClass::kHoleDirichlet) {
        b[k] += hole_value(scene, grid.hole_index[jdx], s) / h2;
      }
    }
  }
  if (s > 0.0 && scene.gamma0 > 0.0) {
    const int ix = static_cast<int>(std::lround((scene.x0.x + 1.0) / grid.h));
    const int iy = static_cast<int>(std::lround((scene.x0.y + 1.0) / grid.h));
    const std::size_t idx = static_cast<std::size_t>(iy) * n + ix;
    const std::int32_t k = grid.compact[idx];
    if (k < 0) {
      throw ArgumentOutOfRange("node nearest x0 is not an interior node");
    }
    b[k] += scene.gamma0 / (scene.D * h2);
  }

  const MaskedOperator op(grid, s / scene.D);
  OracleField out;
  out.s = s;
  out.values.assign(m, 0.0);

  // Conjugate-residual iteration: the minimal-residual member of the CG
  // family for symmetric positive-definite operators. Same single matvec
  // per step as plain CG, but the 2-norm of the residual is minimized
  // over the Krylov space, so the history is nonincreasing.
  std::vector<double> r = b, p = b, ar(m), ap(m);
  auto dot = [m](const std::vector<double>& a, const std::vector<double>& c) {
    double acc = 0.0;
    for (int i = 0; i < m; ++i) acc += a[i] * c[i];
    return acc;
  };
  const double b_norm = std::sqrt(dot(b, b));
  if (b_norm == 0.0) return out;

  op.apply(r, ar);
  ap = ar;
  double r_ar = dot(r, ar);
  out.residual_history.push_back(1.0);
  for (int it = 0; it < max_iterations; ++it) {
    const double alpha = r_ar / dot(ap, ap);
    for (int i = 0; i < m; ++i) {
      out.values[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    const double rel = std::sqrt(dot(r, r)) / b_norm;
    out.residual_history.push_back(rel);
    out.iterations = it + 1;
    if (rel <= tol) {
      out.residual_norm = rel;
      return out;
    }
    op.apply(r, ar);
    const double r_ar_new = dot(r, ar);
    const double beta = r_ar_new / r_ar;
    for (int i = 0; i < m; ++i) {
      p[i] = r[i] + beta * p[i];
      ap[i] = ar[i] + beta * ap[i];
    }
    r_ar = r_ar_new;
  }
  throw CGNotConverged("conjugate-residual solve: " + std::to_string(max_iterations) +
                       " iterations without reaching tol");
}

FieldGrid oracle_to_field(const MaskedGrid& grid, const Scene& scene,
                          const OracleField& field, const std::string& name) {
  FieldGrid out;
  out.nx = grid.n;
  out.ny = grid.n;
  out.values.assign(static_cast<std::size_t>(grid.n) * grid.n, kNaN);
  for (int k = 0; k < grid.n_interior(); ++k) {
    out.values[grid.nodes[k]] = field.values[k];
  }
  for (std::size_t idx = 0; idx < grid.node_class.size(); ++idx) {
    if (grid.node_class[idx] == NodeClass::kHoleDirichlet) {
      out.values[idx] = hole_value(scene, grid.hole_index[idx], field.s);
    }
  }
  out.metadata["field"] = name;
  out.metadata["scene_hash"] = scene_hash(scene);
  out.metadata["nx"] = out.nx;
  out.metadata["ny"] = out.ny;
  out.metadata["h"] = grid.h;
  out.metadata["s"] = field.s;
  return out;
}

FieldGrid acc_time_fd(const Scene& scene, double h, double s_base) {
  if (!(s_base > 0.0)) throw ArgumentOutOfRange("acc_time_fd requires s_base > 0");
  const MaskedGrid grid = build_grid(scene, h);
  const OracleField steady = solve_modified_helmholtz_fd(grid, scene, 0.0);
  const OracleField u_hi = solve_modified_helmholtz_fd(grid, scene, s_base);
  const OracleField u_lo = solve_modified_helmholtz_fd(grid, scene, 0.5 * s_base);

  FieldGrid out;
  out.nx = grid.n;
  out.ny = grid.n;
  out.values.assign(static_cast<std::size_t>(grid.n) * grid.n, kNaN);
  for (int k = 0; k < grid.n_interior(); ++k) {
    const double ustar = steady.values[k];
    const double t_hi = (ustar - s_base * u_hi.values[k]) / (s_base * ustar);
    const double t_lo =
        (ustar - 0.5 * s_base * u_lo.values[k]) / (0.5 * s_base * ustar);
    out.values[grid.nodes[k]] = 2.0 * t_lo - t_hi;
  }
  out.metadata["field"] = "acc_time_fd";
  out.metadata["scene_hash"] = scene_hash(scene);
  out.metadata["nx"] = out.nx;
  out.metadata["ny"] = out.ny;
  out.metadata["h"] = h;
  out.metadata["s_base"] = s_base;
  return out;
}

FieldErrorReport compare_fields(const FieldGrid& a, const FieldGrid& b,
                                const std::vector<Exclusion>& exclusions) {
  if (a.nx != b.nx || a.ny != b.ny || a.xmin != b.xmin || a.xmax != b.xmax ||
      a.ymin != b.ymin || a.ymax != b.ymax) {
    throw GridMismatch("compare_fields requires identical grids");
  }
  FieldErrorReport rep;
  double sum_d2 = 0.0, sum_b2 = 0.0;
  for (int iy = 0; iy < a.ny; ++iy) {
    for (int ix = 0; ix < a.nx; ++ix) {
      const double va = a.at(ix, iy);
      const double vb = b.at(ix, iy);
      if (std::isnan(va) || std::isnan(vb)) continue;
      const Vec2 p{a.x_at(ix), a.y_at(iy)};
      bool excluded = false;
      for (const auto& e : exclusions) {
        if (dist(p, e.center) <= e.radius) {
          excluded = true;
          break;
        }
      }
      if (excluded) continue;
      ++rep.n_compared;
      const double rel = std::abs(va - vb) / std::abs(vb);
      if (rel > rep.linf_rel) {
        rep.linf_rel = rel;
        rep.max_location = p;
      }
      sum_d2 += (va - vb) * (va - vb);
      sum_b2 += vb * vb;
    }
  }
  if (rep.n_compared > 0) rep.l2_rel = std::sqrt(sum_d2 / sum_b2);
  return rep;
}

}  // namespace acctime
