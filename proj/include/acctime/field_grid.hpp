#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "acctime/geometry.hpp"
#include "acctime/scene.hpp"

namespace acctime {

// Rectangular sampling of a scalar field with NaN sentinels at masked
// nodes (outside the disc, inside holes, inside exclusion discs, or where
// the evaluator failed). Node (ix, iy) sits at
//   x = xmin + ix (xmax-xmin)/(nx-1),  y likewise; values are row-major
// in iy.
struct FieldGrid {
  int nx = 0;
  int ny = 0;
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;
  std::vector<double> values;  // size nx*ny, index iy*nx + ix
  nlohmann::json metadata;     // scene hash, field name, parameters

  double x_at(int ix) const { return xmin + ix * (xmax - xmin) / (nx - 1); }
  double y_at(int iy) const { return ymin + iy * (ymax - ymin) / (ny - 1); }
  double& at(int ix, int iy) { return values[static_cast<std::size_t>(iy) * nx + ix]; }
  double at(int ix, int iy) const { return values[static_cast<std::size_t>(iy) * nx + ix]; }
};

struct SweepOptions {
  int nx = 100;
  int ny = 100;
  // nodes within max(epsilon, exclusion_radius) of a hole center are
  // masked; nodes within exclusion_radius of x0 are masked when the
  // field diverges there (mask_x0)
  double exclusion_radius = 0.0;
  bool mask_x0 = false;
  int n_threads = 0;  // 0 = hardware concurrency
};

// Evaluates `field` over the lattice. Evaluator exceptions become masked
// nodes; the count is recorded in metadata["evaluation_errors"]. Output
// is bit-for-bit independent of n_threads.
FieldGrid sweep(const Scene& scene, const std::string& field_name,
                const std::function<double(const Vec2&)>& field,
                const SweepOptions& options);

// CSV format: first line "# {json metadata}", then x,y,value rows
// (row-major, full 17-digit precision, masked nodes as nan).
void write_field_csv(const FieldGrid& grid, const std::string& path);
std::string field_csv_string(const FieldGrid& grid);
FieldGrid read_field_csv(const std::string& path);
FieldGrid parse_field_csv(const std::string& text);

}  // namespace acctime
