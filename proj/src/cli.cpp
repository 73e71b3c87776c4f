#include "umbilic/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "umbilic/expr.hpp"
#include "umbilic/report.hpp"

namespace umbilic {

namespace {

namespace fs = std::filesystem;

struct Flags {
  std::optional<std::string> preset;
  std::optional<std::string> file;
  std::optional<double> c;
  std::string grid = "256x256";
  int depth = 6;
  std::vector<double> eps;
  std::optional<double> eps0;
  std::optional<double> tol;
  std::optional<double> bochner_tol;
  std::string out = ".";
  std::string format = "both";
  std::uint64_t seed = 12345;
  std::optional<double> hsup_override;
  int points = 1000;
  int levels = 3;
  std::string field = "area";
  std::vector<std::string> param;
  std::map<std::string, std::optional<double>> named;
};

const std::vector<std::string> kParamFlags{"r", "a", "b", "c3", "R", "A", "s", "rho"};

GridSpec parse_grid(const std::string& text, int depth) {
  GridSpec g;
  const auto x = text.find_first_of("xX");
  try {
    std::size_t used = 0;
    if (x == std::string::npos) {
      g.nu = g.nv = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, x), b = text.substr(x + 1);
      g.nu = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      g.nv = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::logic_error&) {
    throw InvalidInput("--grid expects NUxNV, got '" + text + "'");
  }
  g.adaptive_depth = depth;
  g.validate();
  return g;
}

RunConfig to_config(const std::string& command, const Flags& f) {
  RunConfig cfg;
  cfg.command = command;
  cfg.preset = f.preset;
  cfg.file = f.file;
  cfg.c_override = f.c;
  for (const auto& [k, v] : f.named) {
    if (v) cfg.preset_params[k] = *v;
  }
  for (const std::string& kv : f.param) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InvalidInput("--param expects key=value, got '" + kv + "'");
    try {
      cfg.preset_params[kv.substr(0, eq)] = eval(parse(kv.substr(eq + 1)), 0.0, 0.0, {});
    } catch (const ParseError& e) {
      throw InvalidInput("--param " + kv + ": " + e.what());
    }
  }
  cfg.grid = parse_grid(f.grid, f.depth);
  if (!f.eps.empty()) cfg.eps_ladder = f.eps;
  if (f.eps0) cfg.eps0 = *f.eps0;
  if (!(cfg.eps0 > 0.0) || cfg.eps0 > 1.0) throw InvalidInput("--eps0 must lie in (0, 1]");
  cfg.tol = f.tol;
  if (cfg.tol && !(*cfg.tol > 0.0)) throw InvalidInput("--tol must be positive");
  if (f.bochner_tol) cfg.bochner_tol = *f.bochner_tol;
  if (!(cfg.bochner_tol > 0.0)) throw InvalidInput("--bochner-tol must be positive");
  cfg.hsup_override = f.hsup_override;
  cfg.out_dir = f.out;
  cfg.write_json = f.format != "csv";
  cfg.write_csv = f.format != "json";
  cfg.seed = f.seed;
  cfg.points = f.points;
  cfg.levels = f.levels;
  cfg.field = f.field;
  return cfg;
}

void write_file(const RunConfig& cfg, const std::string& ext, const std::string& content) {
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / (cfg.command + "." + ext);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidInput("cannot write " + path.string());
  os << content;
}

void write_outputs(const RunConfig& cfg, Json report, const std::string& csv) {
  if (cfg.write_json) {
    stamp(report);
    write_file(cfg, "json", report.dump(2) + "\n");
  }
  if (cfg.write_csv) write_file(cfg, "csv", csv);
}

int cmd_identities(const RunConfig& cfg, const ImmersionSpec& spec, const Json& config, std::ostream& out) {
  IdentitySuiteOptions opt;
  opt.points = cfg.points;
  opt.seed = cfg.seed;
  if (cfg.tol) opt.identity_tol = *cfg.tol;
  opt.bochner_tol = cfg.bochner_tol;
  const IdentitySuiteResult res = run_identity_suite(spec, opt);
  out << "identities on " << spec.name() << " at " << res.points.size() << " points (seed " << cfg.seed << ")\n";
  for (const ResidualStats& s : res.residuals) {
    out << "  " << std::left << std::setw(12) << s.name << " max " << std::scientific << std::setprecision(3)
        << s.max_normalized << "  mean " << s.mean_normalized << "  tol " << s.tolerance << "  "
        << (s.pass ? "ok" : "FAIL") << '\n'
        << std::defaultfloat;
  }
  write_outputs(cfg, identities_to_json(res, config), identities_csv(res, config));
  out << (res.pass() ? "PASS" : "FAIL") << '\n';
  return res.pass() ? kExitOk : kExitVerificationFailed;
}

int cmd_verify(const RunConfig& cfg, const ImmersionSpec& spec, const Json& config, std::ostream& out) {
  VerifyOptions opt;
  opt.grid = cfg.grid;
  opt.hsup_override = cfg.hsup_override;
  opt.tol_margin = cfg.tol;
  opt.corollary_eps0 = cfg.eps0;
  const TheoremReport rep = verify_prel(spec, cfg.eps_ladder, opt);
  out << "surface " << rep.surface << ", c = " << rep.c << ", chi = " << rep.chi.rounded << " (estimate "
      << std::setprecision(8) << rep.chi.estimate << "), H_sup = " << rep.H_sup << ", C = " << rep.C_const
      << '\n';
  out << std::setw(8) << "eps" << std::setw(16) << "lhs" << std::setw(16) << "rhs" << std::setw(16) << "margin"
      << std::setw(16) << "tol_margin" << '\n';
  for (const TheoremRow& r : rep.rows) {
    out << std::setprecision(4) << std::setw(8) << r.eps << std::setprecision(8) << std::setw(16) << r.lhs
        << std::setw(16) << r.rhs << std::setw(16) << r.margin << std::setw(16) << r.tol_margin << '\n';
  }
  for (const std::string& w : rep.warnings) out << "warning: " << w << '\n';
  if (rep.corollary) {
    if (rep.corollary->refusal) {
      out << "corollary: " << *rep.corollary->refusal << '\n';
    } else {
      const CorollaryReport& c = *rep.corollary;
      out << "corollary at eps0 = " << c.eps0 << ": condition 1 " << (c.cond1_holds ? "holds" : "fails")
          << ", condition 2 " << (c.cond2_holds ? "holds" : "fails") << ", condition 3 "
          << (c.cond3_holds ? "holds" : "fails") << " (ladder trend " << c.cond3_trend << ")\n";
    }
  }
  write_outputs(cfg, theorem_to_json(rep, config), theorem_csv(rep, config));
  out << rep.verdict() << '\n';
  return rep.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_sweep(const RunConfig& cfg, const ImmersionSpec& spec, const Json& config, std::ostream& out) {
  const SharpnessReport rep = sharpness_gap(spec, cfg.eps_ladder, cfg.grid);
  out << std::setw(8) << "eps" << std::setw(18) << "sharp_gap" << std::setw(18) << "normalized_gap" << '\n';
  for (const SharpnessRow& r : rep.rows) {
    out << std::setprecision(4) << std::setw(8) << r.eps << std::setprecision(8) << std::setw(18) << r.sharp_gap
        << std::setw(18) << r.normalized_gap << '\n';
  }
  out << "trend of |normalized_gap|: " << rep.trend << '\n';
  write_outputs(cfg, sharpness_to_json(rep, config), sharpness_csv(rep, config));
  return rep.trend == "decreasing" ? kExitOk : kExitVerificationFailed;
}

int cmd_convergence(const RunConfig& cfg, const ImmersionSpec& spec, const Json& config, std::ostream& out) {
  if (cfg.levels < 3) throw InvalidInput("--levels must be at least 3");
  PointField field;
  Region region = Region::all();
  const double e = cfg.eps0;
  if (cfg.field == "area") {
    field = [](const PointGeometry&) { return 1.0; };
  } else if (cfg.field == "R") {
    field = [](const PointGeometry& p) { return p.R; };
  } else if (cfg.field == "vol") {
    field = [](const PointGeometry&) { return 1.0; };
    region = Region::sublevel(e);
  } else if (cfg.field == "term1") {
    field = [e](const PointGeometry& p) { return 2.0 * p.nabla_hring_norm2 * p.hring_norm2 / std::pow(e, 4); };
    region = Region::sublevel(e);
  } else if (cfg.field == "term2") {
    field = [e](const PointGeometry& p) { return p.gradH_norm2 * p.hring_norm2 / std::pow(e, 4); };
    region = Region::sublevel(e);
  } else if (cfg.field == "cond3") {
    field = [e](const PointGeometry& p) { return p.gradH_norm2 / (e * e); };
    region = Region::sublevel(e);
  } else {
    throw InvalidInput("unknown --field '" + cfg.field + "'");
  }
  std::vector<GridSpec> grids{cfg.grid};
  for (int k = 1; k < cfg.levels; ++k) grids.push_back(grids.back().scaled(2.0));
  const std::vector<ConvergenceRow> rows = convergence_study(spec, field, region, grids);
  out << std::setw(12) << "grid" << std::setw(24) << "value" << std::setw(12) << "order" << std::setw(16)
      << "error" << '\n';
  for (const ConvergenceRow& r : rows) {
    std::string order;
    if (r.unstable && r.error_estimate) {
      order = "unstable";
    } else if (r.order) {
      order = format_number(std::round(*r.order * 1e3) / 1e3);
    }
    std::ostringstream error;
    if (r.error_estimate) error << std::setprecision(4) << *r.error_estimate;
    out << std::setw(12) << (std::to_string(r.grid.nu) + "x" + std::to_string(r.grid.nv)) << std::setprecision(15)
        << std::setw(24) << r.value << std::setw(12) << order << std::setw(16) << error.str() << '\n';
  }
  write_outputs(cfg, convergence_to_json(rows, config), convergence_csv(rows, config));
  return kExitOk;
}

int cmd_list_presets(std::ostream& out) {
  for (const PresetInfo& p : preset_catalog()) {
    std::string params;
    for (const std::string& k : p.parameters) params += (params.empty() ? "" : ", ") + k;
    out << std::left << std::setw(28) << p.name << std::setw(12) << params << p.description << '\n';
  }
  return kExitOk;
}

void add_common(CLI::App* sub, Flags& f) {
  auto* src = sub->add_option_group("surface");
  src->add_option("--preset", f.preset, "built-in surface (see list-presets)");
  src->add_option("--file", f.file, "surface definition file");
  for (const std::string& k : kParamFlags) {
    sub->add_option("--" + k, f.named[k], "preset parameter " + k);
  }
  sub->add_option("--param", f.param, "preset parameter as key=value (repeatable)");
  sub->add_option("--c", f.c, "ambient curvature of F^3(c)");
  sub->add_option("--grid", f.grid, "cells per axis, NUxNV")->capture_default_str();
  sub->add_option("--depth", f.depth, "adaptive refinement depth")->capture_default_str();
  sub->add_option("--eps", f.eps, "comma-separated, strictly decreasing eps ladder in (0, 1]")->delimiter(',');
  sub->add_option("--eps0", f.eps0, "eps0 for the corollary, or the level of region fields");
  sub->add_option("--tol", f.tol, "identities: residual tolerance; verify: fixed margin tolerance");
  sub->add_option("--bochner-tol", f.bochner_tol, "identities: tolerance for the Bochner formulas");
  sub->add_option("--out", f.out, "output directory")->capture_default_str();
  sub->add_option("--format", f.format, "json, csv or both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  sub->add_option("--seed", f.seed, "seed of the sample point generator")->capture_default_str();
  sub->add_option("--hsup-override", f.hsup_override, "upper bound for |H| used in C instead of the node maximum");
  sub->add_option("--points", f.points, "identities: number of sample points")->capture_default_str();
  sub->add_option("--levels", f.levels, "convergence: number of grid levels")->capture_default_str();
  sub->add_option("--field", f.field, "convergence: area, R, vol, term1, term2 or cond3")->capture_default_str();
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of an umbilic-set volume estimate for closed surfaces in space forms", "umbilic"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  Flags f;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"identities", "pointwise identity residuals at seeded random points"},
      {"verify", "the volume inequality and the corollary on an eps ladder"},
      {"sweep", "sharpness gap on an ellipsoid of revolution"},
      {"convergence", "grid convergence of one integral"},
  };
  for (const auto& [name, help] : commands) add_common(app.add_subcommand(name, help), f);
  app.add_subcommand("list-presets", "list built-in surfaces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (command == "list-presets") return cmd_list_presets(out);

  RunConfig cfg;
  cfg.command = command;
  cfg.out_dir = f.out;
  cfg.write_csv = f.format != "json";
  cfg.write_json = f.format != "csv";
  std::optional<ImmersionSpec> spec;
  try {
    cfg = to_config(command, f);
    spec.emplace(resolve_surface(cfg));
    const Json config = config_to_json(cfg, &*spec);
    if (command == "identities") return cmd_identities(cfg, *spec, config, out);
    if (command == "verify") return cmd_verify(cfg, *spec, config, out);
    if (command == "sweep") return cmd_sweep(cfg, *spec, config, out);
    return cmd_convergence(cfg, *spec, config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    if (cfg.write_json) {
      try {
        Json report = error_to_json(e.what(), config_to_json(cfg, spec ? &*spec : nullptr));
        stamp(report);
        write_file(cfg, "json", report.dump(2) + "\n");
      } catch (const std::exception&) {
      }
    }
    return kExitError;
  }
}

}  // namespace umbilic
