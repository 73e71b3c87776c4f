#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "umbilic/errors.hpp"
#include "umbilic/expr.hpp"
#include "umbilic/jet.hpp"

namespace umbilic {

/// Open interval (lo, hi).
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// Everything needed to describe a chart f: (u, v) -> conformal model of F^3(c).
struct SurfaceDefinition {
  std::string name;
  std::array<std::string, 3> sources;  // x, y, z as written
  std::array<Expr, 3> components;
  Interval u_range;
  Interval v_range;
  bool periodic_u = false;
  bool periodic_v = false;
  double ambient_c = 0.0;
  ParamTable params;
  /// Strip excluded on each non-periodic side of the domain.
  double singular_margin = 0.0;
};

/// Smallest ambient singular value the Jacobian may have at a sample point.
inline constexpr double kRankTolerance = 1e-8;

/// A validated, immutable immersion.
class ImmersionSpec {
 public:
  /// Validates on a 64x64 sample grid; throws InvalidInput or SingularEvaluation.
  explicit ImmersionSpec(SurfaceDefinition def);

  const SurfaceDefinition& definition() const { return def_; }
  const std::string& name() const { return def_.name; }
  double ambient_c() const { return def_.ambient_c; }
  const ParamTable& params() const { return def_.params; }

  /// Domain actually sampled: the chart rectangle minus the singular margin
  /// on non-periodic sides.
  Interval sample_u() const;
  Interval sample_v() const;

  std::array<Jet2, 3> evaluate(double u, double v, int order) const;
  std::array<double, 3> position(double u, double v) const;

 private:
  void validate() const;

  SurfaceDefinition def_;
};

struct PresetInfo {
  std::string name;
  std::vector<std::string> parameters;
  std::string description;
};

const std::vector<PresetInfo>& preset_catalog();

/// Built-in surface. Ambient curvature defaults to 0 except for
/// centered_sphere_spaceform, whose parameter c is the ambient curvature.
ImmersionSpec preset(const std::string& name, const ParamTable& params);
ImmersionSpec preset(const std::string& name, const ParamTable& params, double ambient_c);

/// Parse a surface definition file (see README for the grammar).
SurfaceDefinition parse_surface_definition(std::string_view text);
ImmersionSpec load_surface_file(const std::filesystem::path& path);

/// Build a definition from expression strings; parses the components.
SurfaceDefinition make_definition(std::string name, const std::array<std::string, 3>& sources,
                                  Interval u_range, Interval v_range, bool periodic_u,
                                  bool periodic_v, double ambient_c, ParamTable params,
                                  double singular_margin);

// Chart transformations used by the invariance suites.

/// Same surface with u and v exchanged; reverses the chart-induced normal.
ImmersionSpec swap_chart_variables(const ImmersionSpec& spec);
/// f(factor * u, v) on the correspondingly scaled u-domain.
ImmersionSpec rescale_u(const ImmersionSpec& spec, double factor);
/// x -> rotation * x + translation; only meaningful for c = 0.
ImmersionSpec rigid_motion(const ImmersionSpec& spec, const std::array<std::array<double, 3>, 3>& rotation,
                           const std::array<double, 3>& translation);

}  // namespace umbilic
