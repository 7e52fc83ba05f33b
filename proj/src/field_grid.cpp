#include "acctime/field_grid.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "acctime/errors.hpp"
#include "acctime/version.hpp"

namespace acctime {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FieldGrid sweep(const Scene& scene, const std::string& field_name,
                const std::function<double(const Vec2&)>& field,
                const SweepOptions& options) {
  FieldGrid grid;
  grid.nx = options.nx;
  grid.ny = options.ny;
  grid.values.assign(static_cast<std::size_t>(options.nx) * options.ny, kNaN);

  std::atomic<long> error_count{0};
  auto eval_row = [&](int iy) {
    const double y = grid.y_at(iy);
    for (int ix = 0; ix < grid.nx; ++ix) {
      const Vec2 p{grid.x_at(ix), y};
      if (norm(p) >= 1.0) continue;
      bool masked = false;
      for (const auto& h : scene.holes) {
        if (dist(p, h.center) <= std::max(scene.epsilon, options.exclusion_radius)) {
          masked = true;
          break;
        }
      }
      if (options.mask_x0 && scene.gamma0 > 0.0 &&
          dist(p, scene.x0) <= options.exclusion_radius) {
        masked = true;
      }
      if (masked) continue;
      try {
        grid.at(ix, iy) = field(p);
      } catch (const Error&) {
        error_count.fetch_add(1, std::memory_order_relaxed);
      }
    }
  };

  int n_threads = options.n_threads > 0
                      ? options.n_threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads <= 1 || grid.ny < 4) {
    for (int iy = 0; iy < grid.ny; ++iy) eval_row(iy);
  } else {
    std::atomic<int> next_row{0};
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      workers.emplace_back([&] {
        for (int iy = next_row.fetch_add(1); iy < grid.ny;
             iy = next_row.fetch_add(1)) {
          eval_row(iy);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  grid.metadata["field"] = field_name;
  grid.metadata["scene_hash"] = scene_hash(scene);
  grid.metadata["version"] = kVersion;
  grid.metadata["nx"] = grid.nx;
  grid.metadata["ny"] = grid.ny;
  grid.metadata["exclusion_radius"] = options.exclusion_radius;
  grid.metadata["evaluation_errors"] = error_count.load();
  return grid;
}

std::string field_csv_string(const FieldGrid& grid) {
  std::ostringstream out;
  out << "# " << grid.metadata.dump() << "\n";
  for (int iy = 0; iy < grid.ny; ++iy) {
    for (int ix = 0; ix < grid.nx; ++ix) {
      out << format_double(grid.x_at(ix)) << ',' << format_double(grid.y_at(iy))
          << ',' << format_double(grid.at(ix, iy)) << "\n";
    }
  }
  return out.str();
}

void write_field_csv(const FieldGrid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw GridMismatch("cannot open output file: " + path);
  out << field_csv_string(grid);
}

FieldGrid parse_field_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.size() < 2 || line[0] != '#') {
    throw GridMismatch("field CSV must start with a '# {json}' header");
  }
  FieldGrid grid;
  grid.metadata = nlohmann::json::parse(line.substr(1));
  grid.nx = grid.metadata.at("nx").get<int>();
  grid.ny = grid.metadata.at("ny").get<int>();
  grid.values.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);

  bool first = true;
  double x_lo = 0, x_hi = 0, y_lo = 0, y_hi = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double x, y, v;
    const char* p = line.c_str();
    char* end = nullptr;
    x = std::strtod(p, &end);
    if (*end != ',') throw GridMismatch("malformed CSV row: " + line);
    y = std::strtod(end + 1, &end);
    if (*end != ',') throw GridMismatch("malformed CSV row: " + line);
    v = std::strtod(end + 1, &end);
    if (first) {
      x_lo = x_hi = x;
      y_lo = y_hi = y;
      first = false;
    } else {
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
    grid.values.push_back(v);
  }
  if (grid.values.size() != static_cast<std::size_t>(grid.nx) * grid.ny) {
    throw GridMismatch("field CSV row count does not match nx*ny");
  }
  grid.xmin = x_lo;
  grid.xmax = x_hi;
  grid.ymin = y_lo;
  grid.ymax = y_hi;
  return grid;
}

FieldGrid read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GridMismatch("cannot open field CSV: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_field_csv(ss.str());
}

}  // namespace acctime
