// Command-line front end: scene sweeps, line cuts, spectral estimates,
// finite-difference oracle runs and asymptotics-vs-oracle comparisons.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "acctime/asymptotics.hpp"
#include "acctime/errors.hpp"
#include "acctime/field_grid.hpp"
#include "acctime/geometry.hpp"
#include "acctime/morphogen1d.hpp"
#include "acctime/oracle_fd.hpp"
#include "acctime/scene.hpp"
#include "acctime/spectral.hpp"
#include "acctime/version.hpp"

namespace {

using namespace acctime;

struct CommonOpts {
  std::string scene_path;
  std::string out = "-";
  double nu = std::numeric_limits<double>::quiet_NaN();
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  bool allow_overshoot = false;
  int grid = 100;
  double exclusion = std::numeric_limits<double>::quiet_NaN();  // default 2 eps
  double s_base = 1e-2;
  int threads = 0;
  std::string cut;  // "", "r" or "theta"
  double fixed = 0.0;
  int cut_n = 200;
};

void add_scene_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--scene", o.scene_path, "scene JSON file")->required();
  auto* nu = cmd->add_option("--nu", o.nu, "override the log-gauge nu");
  auto* eps = cmd->add_option("--epsilon", o.epsilon, "override the hole radius epsilon");
  nu->excludes(eps);
  eps->excludes(nu);
  cmd->add_flag("--allow-overshoot", o.allow_overshoot,
                "accept scenes violating the growth condition");
  cmd->add_option("--out", o.out, "output path ('-' for stdout)");
}

void add_sweep_options(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--grid", o.grid, "sweep resolution per axis");
  cmd->add_option("--exclusion", o.exclusion,
                  "masking radius around holes and x0 (default 2 epsilon)");
  cmd->add_option("--threads", o.threads, "sweep worker threads (0 = auto)");
  cmd->add_option("--cut", o.cut, "line cut instead of a grid: 'r' or 'theta'")
      ->check(CLI::IsMember({"r", "theta"}));
  cmd->add_option("--fixed", o.fixed,
                  "fixed coordinate of the cut (theta for --cut r, r for --cut theta)");
  cmd->add_option("--n", o.cut_n, "number of cut samples");
}

Scene load_scene(const CommonOpts& o) {
  std::ifstream in(o.scene_path);
  if (!in) throw NonpositiveParameter("cannot open scene file: " + o.scene_path);
  std::stringstream ss;
  ss << in.rdbuf();
  Scene raw = parse_scene_json(ss.str());
  if (!std::isnan(o.nu)) {
    raw.nu = o.nu;
    raw.epsilon = std::numeric_limits<double>::quiet_NaN();
  }
  if (!std::isnan(o.epsilon)) {
    raw.epsilon = o.epsilon;
    raw.nu = std::numeric_limits<double>::quiet_NaN();
  }
  if (o.allow_overshoot) raw.allow_overshoot = true;
  Scene sc = validate_scene(raw);
  if (sc.overshoot_warning) {
    std::cerr << "warning: growth condition violated; the accumulation time "
                 "may be negative\n";
  }
  return sc;
}

void emit(const std::string& text, const std::string& out) {
  if (out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw NonpositiveParameter("cannot open output file: " + out);
  f << text;
}

nlohmann::json report_header(const Scene& sc) {
  return {{"scene_hash", scene_hash(sc)}, {"version", kVersion}};
}

std::function<double(const Vec2&)> make_field(const std::string& name,
                                              const Scene& sc, double s_base) {
  if (name == "steady") {
    return [f = SteadyStateField(sc)](const Vec2& x) { return f(x); };
  }
  if (name == "acc_time_order1") {
    return [f = AccTimeOrder1Field(sc)](const Vec2& x) { return f(x); };
  }
  if (name == "acc_time_nonperturbative") {
    return [f = AccTimeNonperturbativeField(sc, s_base)](const Vec2& x) { return f(x); };
  }
  if (name == "acc_time_truncated") {
    return [sc](const Vec2& x) { return truncated_acc_time(sc, x); };
  }
  throw NonpositiveParameter("unknown field: " + name);
}

std::string cut_csv(const Scene& sc, const std::string& field_name,
                    const CommonOpts& o, bool with_t0) {
  const auto field = make_field(field_name, sc, o.s_base);
  std::optional<std::function<double(const Vec2&)>> t0;
  if (with_t0 && sc.n_holes() == 1) {
    t0 = make_field("acc_time_truncated", sc, o.s_base);
  }
  nlohmann::json meta = report_header(sc);
  meta["field"] = field_name;
  meta["cut"] = o.cut;
  meta["fixed"] = o.fixed;
  meta["columns"] = t0 ? "coord,value,truncated" : "coord,value";

  std::ostringstream out;
  out << "# " << meta.dump() << "\n";
  char buf[96];
  for (int i = 0; i < o.cut_n; ++i) {
    Vec2 p;
    double coord;
    if (o.cut == "r") {
      coord = static_cast<double>(i) / (o.cut_n - 1);
      p = polar(coord, o.fixed);
    } else {
      coord = 2.0 * M_PI * i / (o.cut_n - 1);
      p = polar(o.fixed, coord);
    }
    auto value_of = [&](const std::function<double(const Vec2&)>& f) {
      try {
        return f(p);
      } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    const double v = value_of(field);
    if (t0) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", coord, v, value_of(*t0));
    } else {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", coord, v);
    }
    out << buf;
  }
  return out.str();
}

int run_field_command(const std::string& field_name, const CommonOpts& o,
                      bool mask_x0, bool with_t0) {
  const Scene sc = load_scene(o);
  if (!o.cut.empty()) {
    emit(cut_csv(sc, field_name, o, with_t0), o.out);
    return 0;
  }
  SweepOptions opt;
  opt.nx = opt.ny = o.grid;
  opt.exclusion_radius = std::isnan(o.exclusion) ? 2.0 * sc.epsilon : o.exclusion;
  opt.mask_x0 = mask_x0;
  opt.n_threads = o.threads;
  FieldGrid grid = sweep(sc, field_name, make_field(field_name, sc, o.s_base), opt);
  if (field_name == "acc_time_nonperturbative") grid.metadata["s_base"] = o.s_base;
  emit(field_csv_string(grid), o.out);
  return 0;
}

int run_eigen(const CommonOpts& o) {
  const Scene sc = load_scene(o);
  const SpectralEstimate est = principal_eigenvalue(sc);
  nlohmann::json j = report_header(sc);
  j["lambda_root"] = est.lambda_root;
  j["lambda_two_term"] = est.lambda_two_term;
  j["tau"] = est.tau;
  j["n_holes"] = est.n_holes;
  emit(j.dump(2) + "\n", o.out);
  return 0;
}

int run_oracle(const CommonOpts& o, const std::string& mode, double h, double s) {
  const Scene sc = load_scene(o);
  if (mode == "acctime") {
    emit(field_csv_string(acc_time_fd(sc, h, o.s_base)), o.out);
    return 0;
  }
  const MaskedGrid grid = build_grid(sc, h);
  const double s_eff = (mode == "steady") ? 0.0 : s;
  const OracleField u = solve_modified_helmholtz_fd(grid, sc, s_eff);
  emit(field_csv_string(oracle_to_field(grid, sc, u, "oracle_" + mode)), o.out);
  return 0;
}

int run_compare(const CommonOpts& o, double h, double hole_excl_mult,
                double x0_excl) {
  const Scene sc = load_scene(o);
  const FieldGrid t_fd = acc_time_fd(sc, h, o.s_base);

  SweepOptions opt;
  opt.nx = opt.ny = t_fd.nx;
  opt.exclusion_radius = sc.epsilon;
  opt.mask_x0 = false;
  opt.n_threads = o.threads;
  const FieldGrid t_asym =
      sweep(sc, "acc_time_nonperturbative",
            make_field("acc_time_nonperturbative", sc, o.s_base), opt);

  std::vector<Exclusion> exclusions;
  for (const auto& hole : sc.holes) {
    exclusions.push_back({hole.center, hole_excl_mult * sc.epsilon});
  }
  if (sc.gamma0 > 0.0) exclusions.push_back({sc.x0, x0_excl});
  const FieldErrorReport rep = compare_fields(t_asym, t_fd, exclusions);

  nlohmann::json j = report_header(sc);
  j["linf_rel"] = rep.linf_rel;
  j["l2_rel"] = rep.l2_rel;
  j["max_location"] = {rep.max_location.x, rep.max_location.y};
  j["n_compared"] = rep.n_compared;
  j["h"] = h;
  j["s_base"] = o.s_base;
  j["epsilon"] = sc.epsilon;
  j["nu"] = sc.nu;
  emit(j.dump(2) + "\n", o.out);
  return 0;
}

int run_sweep1d(double D, double k, double J, double L, double xmax, int n,
                const std::string& out) {
  namespace m1 = acctime::morphogen1d;
  const m1::Params p = m1::make_params(D, k, J, L);
  if (L < 10.0 * p.xi()) {
    std::cerr << "warning: L < 10 xi; the semi-infinite steady profile is "
                 "a poor approximation\n";
  }
  nlohmann::json meta = {
      {"version", kVersion}, {"D", D}, {"k", k}, {"J", J}, {"L", L},
      {"columns", "x,steady,acc_time,acc_time_numeric,acc_time_truncated"}};
  std::ostringstream os;
  os << "# " << meta.dump() << "\n";
  char buf[160];
  for (int i = 0; i < n; ++i) {
    const double x = xmax * i / (n - 1);
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", x,
                  m1::steady_1d(x, p), m1::acc_time_1d_exact(x, p),
                  m1::acc_time_1d_numeric(x, p), m1::truncated_acc_time_1d(x, p));
    os << buf;
  }
  emit(os.str(), out);
  return 0;
}

int run_presets(const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const Scene& sc) {
    std::ofstream f(fs::path(dir) / name);
    f << scene_to_json_string(sc) << "\n";
  };
  write("fig3.json", presets::single_hole_offset());
  write("fig3d.json", presets::single_hole_rotated());
  write("fig5_gamma0.json", presets::two_holes(0.0));
  write("fig5_gamma1.json", presets::two_holes(1.0));
  write("oracle_eps005.json", presets::oracle_single(0.05));
  write("oracle_eps01.json", presets::oracle_single(0.1));
  std::ofstream readme(fs::path(dir) / "presets.md");
  readme <<
      "# Example configurations\n\n"
      "- `fig3.json` - single hole at 0.5(cos pi/6, sin pi/6), point mass at\n"
      "  (0.5, 0), nu = 0.1. Contours: `acctime acctime --scene fig3.json`;\n"
      "  the truncated field via `acctime t0`; their difference peaks near x0.\n"
      "- `fig3d.json` - hole rotated to theta = 4 pi/3 with x0 = (0.1, 0).\n"
      "- radial profiles (value and truncated column together):\n"
      "  `acctime acctime --scene fig3.json --cut r --fixed 0.5235987755982988`\n"
      "  (also try --fixed 0.2617993877991494 and --fixed 0).\n"
      "- angular profiles: `acctime acctime --scene fig3.json --cut theta --fixed 0.5`.\n"
      "- `fig5_gamma0.json`, `fig5_gamma1.json` - hole pair at (+-0.2, 0) with\n"
      "  x0 = (0, 0.5); the gamma1 variant adds the initial-mass minimum.\n"
      "- `oracle_eps005.json`, `oracle_eps01.json` - grid-resolvable single-hole\n"
      "  scenes for `acctime oracle` and `acctime compare`.\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accumulation time of diffusion in a perforated unit disc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", acctime::kVersion);

  CommonOpts steady_o, acct_o, np_o, t0_o, eigen_o, oracle_o, compare_o;

  auto* steady = app.add_subcommand("steady", "steady-state concentration field");
  add_scene_options(steady, steady_o);
  add_sweep_options(steady, steady_o);

  auto* acct = app.add_subcommand("acctime", "accumulation time (order-1 expansion)");
  add_scene_options(acct, acct_o);
  add_sweep_options(acct, acct_o);

  auto* np = app.add_subcommand(
      "acctime-np", "accumulation time (non-perturbative in the log gauge)");
  add_scene_options(np, np_o);
  add_sweep_options(np, np_o);
  np->add_option("--s-base", np_o.s_base, "base Laplace variable of the extrapolation");

  auto* t0 = app.add_subcommand("t0", "leading-eigenmode truncated accumulation time");
  add_scene_options(t0, t0_o);
  add_sweep_options(t0, t0_o);

  auto* eigen = app.add_subcommand("eigen", "principal eigenvalue and relaxation time");
  add_scene_options(eigen, eigen_o);

  auto* oracle = app.add_subcommand("oracle", "finite-difference reference solve");
  oracle->set_help_flag("--help", "print help");  // frees -h; spacing flag is --h
  add_scene_options(oracle, oracle_o);
  std::string oracle_mode = "acctime";
  double oracle_h = 1.0 / 128.0, oracle_s = 1e-2;
  oracle->add_option("--mode", oracle_mode, "steady | laplace | acctime")
      ->check(CLI::IsMember({"steady", "laplace", "acctime"}));
  oracle->add_option("--h", oracle_h, "lattice spacing");
  oracle->add_option("--s", oracle_s, "Laplace variable for --mode laplace");
  oracle->add_option("--s-base", oracle_o.s_base, "extrapolation base for --mode acctime");

  auto* compare = app.add_subcommand(
      "compare", "asymptotic vs finite-difference accumulation time");
  compare->set_help_flag("--help", "print help");
  add_scene_options(compare, compare_o);
  double compare_h = 1.0 / 128.0, hole_excl_mult = 3.0, x0_excl = 0.1;
  compare->add_option("--h", compare_h, "lattice spacing");
  compare->add_option("--s-base", compare_o.s_base, "extrapolation base");
  compare->add_option("--hole-exclusion-mult", hole_excl_mult,
                      "exclusion radius around holes, in units of epsilon");
  compare->add_option("--x0-exclusion", x0_excl, "exclusion radius around x0");
  compare->add_option("--threads", compare_o.threads, "sweep worker threads");

  auto* sweep1d = app.add_subcommand("sweep1d", "1D gradient-formation profile");
  double m_D = 1.0, m_k = 1.0, m_J = 1.0, m_L = 20.0, m_xmax = 10.0;
  int m_n = 200;
  std::string m_out = "-";
  sweep1d->add_option("--D", m_D, "diffusivity");
  sweep1d->add_option("--k", m_k, "degradation rate");
  sweep1d->add_option("--J", m_J, "boundary flux");
  sweep1d->add_option("--L", m_L, "domain length");
  sweep1d->add_option("--xmax", m_xmax, "profile extent");
  sweep1d->add_option("--n", m_n, "samples");
  sweep1d->add_option("--out", m_out, "output path ('-' for stdout)");

  auto* presets_cmd = app.add_subcommand("presets", "write example scene files");
  std::string presets_dir = "presets";
  presets_cmd->add_option("--dir", presets_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (steady->parsed()) return run_field_command("steady", steady_o, false, false);
    if (acct->parsed()) return run_field_command("acc_time_order1", acct_o, true, true);
    if (np->parsed())
      return run_field_command("acc_time_nonperturbative", np_o, true, false);
    if (t0->parsed()) return run_field_command("acc_time_truncated", t0_o, true, false);
    if (eigen->parsed()) return run_eigen(eigen_o);
    if (oracle->parsed()) return run_oracle(oracle_o, oracle_mode, oracle_h, oracle_s);
    if (compare->parsed())
      return run_compare(compare_o, compare_h, hole_excl_mult, x0_excl);
    if (sweep1d->parsed())
      return run_sweep1d(m_D, m_k, m_J, m_L, m_xmax, m_n, m_out);
    if (presets_cmd->parsed()) return run_presets(presets_dir);
  } catch (const acctime::Error& e) {
    nlohmann::json err = {{"error", e.code()}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::json err = {{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump() << "\n";
    return 1;
  }
  return 0;
}
