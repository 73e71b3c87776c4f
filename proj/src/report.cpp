#include "umbilic/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <numbers>
#include <sstream>

#ifndef UMBILIC_VERSION
#define UMBILIC_VERSION "0.0.0"
#endif

namespace umbilic {

namespace {

Json grid_to_json(const GridSpec& g) { return Json{{"nu", g.nu}, {"nv", g.nv}, {"adaptive_depth", g.adaptive_depth}}; }

Json params_to_json(const ParamTable& p) {
  Json out = Json::object();
  for (const auto& [k, v] : p) out[k] = v;
  return out;
}

template <class T>
Json optional_json(const std::optional<T>& x) {
  return x ? Json(*x) : Json(nullptr);
}

std::string csv_header(const Json& config, const std::string& columns) {
  std::ostringstream os;
  os << "# umbilic " << tool_version() << '\n';
  os << "# config: " << config.dump() << '\n';
  os << columns << '\n';
  return os.str();
}

}  // namespace

std::string tool_version() { return UMBILIC_VERSION; }

ImmersionSpec resolve_surface(const RunConfig& config) {
  if (config.preset.has_value() == config.file.has_value()) {
    throw InvalidInput("give exactly one of --preset or --file");
  }
  if (config.preset) {
    if (config.c_override) return preset(*config.preset, config.preset_params, *config.c_override);
    return preset(*config.preset, config.preset_params);
  }
  if (!config.preset_params.empty()) throw InvalidInput("preset parameters cannot be combined with --file");
  ImmersionSpec spec = load_surface_file(*config.file);
  if (!config.c_override) return spec;
  SurfaceDefinition def = spec.definition();
  def.ambient_c = *config.c_override;
  return ImmersionSpec(std::move(def));
}

Json surface_to_json(const ImmersionSpec& spec) {
  const SurfaceDefinition& d = spec.definition();
  return Json{{"name", d.name},
              {"params", params_to_json(d.params)},
              {"c", d.ambient_c},
              {"x", d.sources[0]},
              {"y", d.sources[1]},
              {"z", d.sources[2]},
              {"u_range", {d.u_range.lo, d.u_range.hi}},
              {"v_range", {d.v_range.lo, d.v_range.hi}},
              {"periodic_u", d.periodic_u},
              {"periodic_v", d.periodic_v},
              {"singular_margin", d.singular_margin}};
}

Json config_to_json(const RunConfig& config, const ImmersionSpec* spec) {
  Json source = Json::object();
  if (config.preset) {
    source["preset"] = *config.preset;
    source["params"] = params_to_json(config.preset_params);
  }
  if (config.file) source["file"] = *config.file;
  return Json{{"command", config.command},
              {"source", source},
              {"c_override", optional_json(config.c_override)},
              {"surface", spec ? surface_to_json(*spec) : Json(nullptr)},
              {"grid", grid_to_json(config.grid)},
              {"eps", config.eps_ladder},
              {"eps0", config.eps0},
              {"tol", optional_json(config.tol)},
              {"bochner_tol", config.bochner_tol},
              {"hsup_override", optional_json(config.hsup_override)},
              {"seed", config.seed},
              {"points", config.points},
              {"levels", config.levels},
              {"field", config.field},
              {"tool_version", tool_version()}};
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json theorem_to_json(const TheoremReport& r, const Json& config) {
  Json rows = Json::array();
  for (const TheoremRow& row : r.rows) {
    rows.push_back(Json{{"eps", row.eps},
                        {"vol_omega_c", row.vol_omega_c},
                        {"lhs", row.lhs},
                        {"term1", row.term1},
                        {"term2", row.term2},
                        {"rhs", row.rhs},
                        {"margin", row.margin},
                        {"tol_margin", row.tol_margin},
                        {"cond3_value", row.cond3_value},
                        {"sharp_gap", row.sharp_gap},
                        {"min_C", optional_json(row.min_C)},
                        {"balance_residual", row.balance_residual},
                        {"inside_nodes", row.inside_nodes}});
  }
  Json tol_grids = Json::array();
  for (const GridSpec& g : r.tolerance_grids) tol_grids.push_back(grid_to_json(g));

  Json out{{"config", config},
           {"surface", Json{{"name", r.surface}, {"params", params_to_json(r.params)}, {"c", r.c}}},
           {"chi", r.chi.rounded},
           {"chi_estimate", r.chi.estimate},
           {"area", r.chi.area},
           {"total_R", r.chi.total_R},
           {"H_sup", r.H_sup},
           {"H_sup_overridden", r.H_sup_overridden},
           {"H_sup_change", optional_json(r.H_sup_change)},
           {"C_const", r.C_const},
           {"grid", grid_to_json(r.grid)},
           {"tolerance_grids", tol_grids},
           {"rows", rows},
           {"verdict", r.verdict()},
           {"errors", Json::array()},
           {"warnings", r.warnings}};

  if (r.corollary) {
    const CorollaryReport& c = *r.corollary;
    Json cj{{"eps0", c.eps0}, {"chi", c.chi_rounded}};
    if (c.refusal) {
      cj["refused"] = *c.refusal;
    } else {
      cj["region_empty"] = c.region_empty;
      cj["pointwise_tol"] = c.pointwise_tol;
      cj["condition1"] = Json{{"max_gradH_norm2", c.cond1_max_gradH_norm2}, {"holds", c.cond1_holds}};
      cj["condition2"] = Json{{"max_excess", c.cond2_max_excess}, {"holds", c.cond2_holds}};
      cj["condition3"] = Json{{"eps", c.ladder_eps},
                              {"value", c.ladder_cond3},
                              {"threshold", 8.0 * std::numbers::pi},
                              {"trend", c.cond3_trend},
                              {"holds", c.cond3_holds},
                              {"note", "limsup read from a finite ladder trend, not certified"}};
      cj["verdict"] = c.implies_positive_umbilic_measure ? "implies Vol(Omega^c_0) > 0" : "no condition holds";
    }
    out["corollary"] = cj;
  }
  return out;
}

std::string theorem_csv(const TheoremReport& r, const Json& config) {
  std::string s = csv_header(config, "eps,vol_omega_c,term1,term2,lhs,rhs,margin,cond3_value,sharp_gap");
  for (const TheoremRow& row : r.rows) {
    for (double x : {row.eps, row.vol_omega_c, row.term1, row.term2, row.lhs, row.rhs, row.margin, row.cond3_value}) {
      s += format_number(x) + ',';
    }
    s += format_number(row.sharp_gap) + '\n';
  }
  return s;
}

Json identities_to_json(const IdentitySuiteResult& result, const Json& config) {
  Json rows = Json::array();
  for (const ResidualStats& s : result.residuals) {
    rows.push_back(Json{{"identity", s.name},
                        {"max_normalized", s.max_normalized},
                        {"mean_normalized", s.mean_normalized},
                        {"max_value", s.max_value},
                        {"tolerance", s.tolerance},
                        {"worst", {s.worst.u, s.worst.v}},
                        {"pass", s.pass}});
  }
  return Json{{"config", config},
              {"points", result.points.size()},
              {"residuals", rows},
              {"verdict", result.pass() ? "PASS" : "FAIL"},
              {"errors", Json::array()}};
}

std::string identities_csv(const IdentitySuiteResult& result, const Json& config) {
  std::string s =
      csv_header(config, "identity,max_normalized,mean_normalized,max_value,tolerance,worst_u,worst_v,pass");
  for (const ResidualStats& r : result.residuals) {
    s += r.name + ',' + format_number(r.max_normalized) + ',' + format_number(r.mean_normalized) + ',' +
         format_number(r.max_value) + ',' + format_number(r.tolerance) + ',' + format_number(r.worst.u) + ',' +
         format_number(r.worst.v) + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return s;
}

Json sharpness_to_json(const SharpnessReport& report, const Json& config) {
  Json rows = Json::array();
  for (const SharpnessRow& r : report.rows) {
    rows.push_back(Json{{"eps", r.eps},
                        {"term1", r.term1},
                        {"term2", r.term2},
                        {"sharp_gap", r.sharp_gap},
                        {"normalized_gap", r.normalized_gap}});
  }
  return Json{{"config", config},
              {"a", report.a},
              {"b", report.b},
              {"rows", rows},
              {"trend", report.trend},
              {"note", "trend of |normalized_gap| along a finite ladder; the limit itself is not certified"},
              {"verdict", report.trend == "decreasing" ? "PASS" : "FAIL"},
              {"errors", Json::array()}};
}

std::string sharpness_csv(const SharpnessReport& report, const Json& config) {
  std::string s = csv_header(config, "eps,sharp_gap,normalized_gap,trend");
  for (const SharpnessRow& r : report.rows) {
    s += format_number(r.eps) + ',' + format_number(r.sharp_gap) + ',' + format_number(r.normalized_gap) + ',' +
         report.trend + '\n';
  }
  return s;
}

Json convergence_to_json(const std::vector<ConvergenceRow>& rows, const Json& config) {
  Json out = Json::array();
  for (const ConvergenceRow& r : rows) {
    out.push_back(Json{{"grid", grid_to_json(r.grid)},
                       {"value", r.value},
                       {"estimated_order", optional_json(r.order)},
                       {"error_estimate", optional_json(r.error_estimate)},
                       {"unstable", r.unstable}});
  }
  return Json{{"config", config}, {"rows", out}, {"errors", Json::array()}};
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, const Json& config) {
  std::string s = csv_header(config, "grid,value,estimated_order,error_estimate");
  for (const ConvergenceRow& r : rows) {
    s += std::to_string(r.grid.nu) + 'x' + std::to_string(r.grid.nv) + ',' + format_number(r.value) + ',';
    if (r.unstable && r.error_estimate) {
      s += "unstable";
    } else if (r.order) {
      s += format_number(*r.order);
    }
    s += ',';
    if (r.error_estimate) s += format_number(*r.error_estimate);
    s += '\n';
  }
  return s;
}

Json error_to_json(const std::string& message, const Json& config) {
  return Json{{"config", config}, {"verdict", "ERROR"}, {"errors", Json::array({message})}};
}

void stamp(Json& report) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  report["generated_at"] = buf;
  report["tool_version"] = tool_version();
}

}  // namespace umbilic
