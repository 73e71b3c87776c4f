#pragma once

// Resolved run configuration and the JSON / CSV writers for every command.
// Every output embeds the full configuration, so a report can be reproduced
// from its own header.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "umbilic/identity_suite.hpp"
#include "umbilic/quadrature.hpp"
#include "umbilic/verifier.hpp"

namespace umbilic {

using Json = nlohmann::ordered_json;

std::string tool_version();

struct RunConfig {
  std::string command;

  // Surface source: a preset with parameters, or a definition file.
  std::optional<std::string> preset;
  ParamTable preset_params;
  std::optional<std::string> file;
  std::optional<double> c_override;

  GridSpec grid;
  std::vector<double> eps_ladder{0.5, 0.25, 0.1, 0.05};
  double eps0 = 0.1;
  std::optional<double> tol;
  double bochner_tol = 1e-6;
  std::optional<double> hsup_override;

  std::string out_dir = ".";
  bool write_json = true;
  bool write_csv = true;

  std::uint64_t seed = 12345;
  int points = 1000;
  int levels = 3;
  std::string field = "area";
};

/// Builds the surface the configuration names.
ImmersionSpec resolve_surface(const RunConfig& config);

Json surface_to_json(const ImmersionSpec& spec);
/// Configuration with the resolved surface; surface may be null if resolution failed.
Json config_to_json(const RunConfig& config, const ImmersionSpec* spec);

/// %.17g; nan and inf spelled out.
std::string format_number(double x);

Json theorem_to_json(const TheoremReport& report, const Json& config);
/// Columns: eps,vol_omega_c,term1,term2,lhs,rhs,margin,cond3_value,sharp_gap.
std::string theorem_csv(const TheoremReport& report, const Json& config);

Json identities_to_json(const IdentitySuiteResult& result, const Json& config);
/// Columns: identity,max_normalized,mean_normalized,max_value,tolerance,worst_u,worst_v,pass.
std::string identities_csv(const IdentitySuiteResult& result, const Json& config);

Json sharpness_to_json(const SharpnessReport& report, const Json& config);
/// Columns: eps,sharp_gap,normalized_gap,trend.
std::string sharpness_csv(const SharpnessReport& report, const Json& config);

Json convergence_to_json(const std::vector<ConvergenceRow>& rows, const Json& config);
/// Columns: grid,value,estimated_order,error_estimate.
std::string convergence_csv(const std::vector<ConvergenceRow>& rows, const Json& config);

/// Top-level JSON for a run that stopped with an error.
Json error_to_json(const std::string& message, const Json& config);

/// Adds generated_at and tool_version to a top-level report object.
void stamp(Json& report);

}  // namespace umbilic
