#include "umbilic/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace umbilic {

namespace {

constexpr double kPolarMargin = 1e-3;
constexpr int kValidationSamples = 64;

Interval shrink(Interval r, bool periodic, double margin) {
  if (periodic) return r;
  return {r.lo + margin, r.hi - margin};
}

}  // namespace

SurfaceDefinition make_definition(std::string name, const std::array<std::string, 3>& sources,
                                  Interval u_range, Interval v_range, bool periodic_u,
                                  bool periodic_v, double ambient_c, ParamTable params,
                                  double singular_margin) {
  SurfaceDefinition def;
  def.name = std::move(name);
  def.sources = sources;
  for (std::size_t i = 0; i < 3; ++i) def.components[i] = parse(sources[i], params);
  def.u_range = u_range;
  def.v_range = v_range;
  def.periodic_u = periodic_u;
  def.periodic_v = periodic_v;
  def.ambient_c = ambient_c;
  def.params = std::move(params);
  def.singular_margin = singular_margin;
  return def;
}

ImmersionSpec::ImmersionSpec(SurfaceDefinition def) : def_(std::move(def)) { validate(); }

Interval ImmersionSpec::sample_u() const { return shrink(def_.u_range, def_.periodic_u, def_.singular_margin); }
Interval ImmersionSpec::sample_v() const { return shrink(def_.v_range, def_.periodic_v, def_.singular_margin); }

std::array<Jet2, 3> ImmersionSpec::evaluate(double u, double v, int order) const {
  return {eval_jet(def_.components[0], u, v, order, def_.params),
          eval_jet(def_.components[1], u, v, order, def_.params),
          eval_jet(def_.components[2], u, v, order, def_.params)};
}

std::array<double, 3> ImmersionSpec::position(double u, double v) const {
  return {eval(def_.components[0], u, v, def_.params), eval(def_.components[1], u, v, def_.params),
          eval(def_.components[2], u, v, def_.params)};
}

void ImmersionSpec::validate() const {
  for (const auto& c : def_.components) {
    if (!c) throw InvalidInput("surface '" + def_.name + "' is missing a component expression");
  }
  if (!std::isfinite(def_.ambient_c)) throw InvalidInput("ambient curvature must be finite");
  if (!(def_.singular_margin >= 0.0)) throw InvalidInput("singular_margin must be >= 0");
  const Interval su = sample_u();
  const Interval sv = sample_v();
  if (!(su.length() > 0.0) || !(sv.length() > 0.0)) {
    throw InvalidInput("surface '" + def_.name + "': empty parameter domain after margin");
  }
  const double c = def_.ambient_c;
  for (int i = 0; i < kValidationSamples; ++i) {
    const double u = su.lo + (i + 0.5) * su.length() / kValidationSamples;
    for (int j = 0; j < kValidationSamples; ++j) {
      const double v = sv.lo + (j + 0.5) * sv.length() / kValidationSamples;
      std::array<Jet2, 3> f;
      try {
        f = evaluate(u, v, 1);
      } catch (const SingularEvaluation& e) {
        throw e.point() ? e : e.at({u, v});
      }
      double r2 = 0.0;
      double guu = 0.0, guv = 0.0, gvv = 0.0;
      for (const auto& x : f) {
        r2 += x.value() * x.value();
        guu += x.d(1, 0) * x.d(1, 0);
        guv += x.d(1, 0) * x.d(0, 1);
        gvv += x.d(0, 1) * x.d(0, 1);
      }
      if (c < 0.0 && std::abs(c) / 4.0 * r2 >= 1.0) {
        throw InvalidInput("surface '" + def_.name + "' leaves the conformal ball of F^3(" +
                           std::to_string(c) + ") at (u, v) = (" + std::to_string(u) + ", " +
                           std::to_string(v) + ")");
      }
      const double lambda = 1.0 / (1.0 + c / 4.0 * r2);
      // Smallest eigenvalue of J^T J, then scale to the ambient metric.
      const double tr = guu + gvv;
      const double det = guu * gvv - guv * guv;
      const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
      const double smallest = std::sqrt(std::max(0.0, tr / 2.0 - disc));
      if (!(lambda * smallest > kRankTolerance)) {
        throw SingularEvaluation("rank-deficient immersion (smallest singular value of df)", lambda * smallest,
                                 ChartPoint{u, v});
      }
    }
  }
}

const std::vector<PresetInfo>& preset_catalog() {
  static const std::vector<PresetInfo> catalog{
      {"sphere", {"r"}, "round sphere of radius r, polar chart"},
      {"ellipsoid_rev", {"a", "b"}, "ellipsoid of revolution, equatorial radius a, polar semi-axis b"},
      {"ellipsoid_tri", {"a", "b", "c3"}, "triaxial ellipsoid with semi-axes a, b, c3"},
      {"torus", {"R", "r"}, "torus of revolution, tube radius r around a circle of radius R"},
      {"graph_bump", {"A", "s"},
       "radial graph 1 + A exp(-|x - e1|^2 / s^2) over the unit sphere (closed, non-symmetric)"},
      {"centered_sphere_spaceform", {"rho", "c"},
       "Euclidean sphere of radius rho at the origin of the conformal model of F^3(c)"},
  };
  return catalog;
}

namespace {

double require_param(const ParamTable& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) throw InvalidInput("missing preset parameter '" + key + "'");
  if (!std::isfinite(it->second)) throw InvalidInput("preset parameter '" + key + "' is not finite");
  return it->second;
}

void require_positive(const ParamTable& params, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (!(require_param(params, k) > 0.0)) {
      throw InvalidInput(std::string("preset parameter '") + k + "' must be positive");
    }
  }
}

ParamTable with_defaults(const PresetInfo& info, const ParamTable& given) {
  static const std::map<std::string, ParamTable> kDefaults{
      {"sphere", {{"r", 1.0}}},
      {"ellipsoid_rev", {{"a", 1.0}, {"b", 2.0}}},
      {"ellipsoid_tri", {{"a", 1.0}, {"b", 1.3}, {"c3", 1.7}}},
      {"torus", {{"R", 2.0}, {"r", 1.0}}},
      {"graph_bump", {{"A", 0.3}, {"s", 1.0}}},
      {"centered_sphere_spaceform", {{"rho", 0.5}, {"c", 1.0}}},
  };
  ParamTable out = kDefaults.at(info.name);
  for (const auto& [k, v] : given) {
    if (std::find(info.parameters.begin(), info.parameters.end(), k) == info.parameters.end()) {
      throw InvalidInput("preset '" + info.name + "' has no parameter '" + k + "'");
    }
    out[k] = v;
  }
  return out;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

ImmersionSpec preset(const std::string& name, const ParamTable& given) {
  double c = 0.0;
  if (name == "centered_sphere_spaceform") {
    auto it = given.find("c");
    c = it == given.end() ? 1.0 : it->second;
  }
  return preset(name, given, c);
}

ImmersionSpec preset(const std::string& name, const ParamTable& given, double ambient_c) {
  const auto& catalog = preset_catalog();
  auto info = std::find_if(catalog.begin(), catalog.end(), [&](const PresetInfo& p) { return p.name == name; });
  if (info == catalog.end()) throw InvalidInput("unknown preset '" + name + "'");
  ParamTable p = with_defaults(*info, given);

  const Interval polar{0.0, kPi};
  const Interval full{0.0, 2.0 * kPi};

  if (name == "sphere") {
    require_positive(p, {"r"});
    return ImmersionSpec(make_definition(name, {"r*sin(u)*cos(v)", "r*sin(u)*sin(v)", "r*cos(u)"}, polar, full,
                                         false, true, ambient_c, p, kPolarMargin));
  }
  if (name == "ellipsoid_rev") {
    require_positive(p, {"a", "b"});
    return ImmersionSpec(make_definition(name, {"a*sin(u)*cos(v)", "a*sin(u)*sin(v)", "b*cos(u)"}, polar, full,
                                         false, true, ambient_c, p, kPolarMargin));
  }
  if (name == "ellipsoid_tri") {
    require_positive(p, {"a", "b", "c3"});
    return ImmersionSpec(make_definition(name, {"a*sin(u)*cos(v)", "b*sin(u)*sin(v)", "c3*cos(u)"}, polar, full,
                                         false, true, ambient_c, p, kPolarMargin));
  }
  if (name == "torus") {
    require_positive(p, {"R", "r"});
    if (p.at("r") >= p.at("R")) throw InvalidInput("torus requires r < R");
    return ImmersionSpec(make_definition(
        name, {"(R + r*cos(u))*cos(v)", "(R + r*cos(u))*sin(v)", "r*sin(u)"}, full, full, true, true, ambient_c, p,
        0.0));
  }
  if (name == "graph_bump") {
    require_positive(p, {"s"});
    if (!(require_param(p, "A") > -1.0)) throw InvalidInput("graph_bump requires A > -1");
    const std::string rho = "(1 + A*exp(-(2 - 2*sin(u)*cos(v))/s^2))";
    return ImmersionSpec(make_definition(name,
                                         {rho + "*sin(u)*cos(v)", rho + "*sin(u)*sin(v)", rho + "*cos(u)"},
                                         polar, full, false, true, ambient_c, p, kPolarMargin));
  }
  // centered_sphere_spaceform
  require_positive(p, {"rho"});
  p["c"] = ambient_c;
  const double rho = p.at("rho");
  if (ambient_c < 0.0 && std::abs(ambient_c) / 4.0 * rho * rho >= 1.0) {
    throw InvalidInput("centered_sphere_spaceform: radius outside the conformal ball for c < 0");
  }
  return ImmersionSpec(make_definition(name, {"rho*sin(u)*cos(v)", "rho*sin(u)*sin(v)", "rho*cos(u)"}, polar, full,
                                       false, true, ambient_c, p, kPolarMargin));
}

ImmersionSpec swap_chart_variables(const ImmersionSpec& spec) {
  SurfaceDefinition def = spec.definition();
  const Expr u = ast::variable("u");
  const Expr v = ast::variable("v");
  for (std::size_t i = 0; i < 3; ++i) {
    def.components[i] = substitute_chart(def.components[i], v, u);
    def.sources[i] = to_string(def.components[i]);
  }
  std::swap(def.u_range, def.v_range);
  std::swap(def.periodic_u, def.periodic_v);
  def.name += "[swapped]";
  return ImmersionSpec(std::move(def));
}

ImmersionSpec rescale_u(const ImmersionSpec& spec, double factor) {
  if (!(factor > 0.0)) throw InvalidInput("rescale factor must be positive");
  SurfaceDefinition def = spec.definition();
  const Expr scaled = ast::binary(BinaryOp::Mul, ast::number(factor), ast::variable("u"));
  for (std::size_t i = 0; i < 3; ++i) {
    def.components[i] = substitute(def.components[i], "u", scaled);
    def.sources[i] = to_string(def.components[i]);
  }
  def.u_range = {def.u_range.lo / factor, def.u_range.hi / factor};
  def.name += "[u*" + std::to_string(factor) + "]";
  return ImmersionSpec(std::move(def));
}

ImmersionSpec rigid_motion(const ImmersionSpec& spec, const std::array<std::array<double, 3>, 3>& rotation,
                           const std::array<double, 3>& translation) {
  SurfaceDefinition def = spec.definition();
  const auto old = def.components;
  for (std::size_t i = 0; i < 3; ++i) {
    Expr sum = ast::number(translation[i]);
    for (std::size_t j = 0; j < 3; ++j) {
      sum = ast::binary(BinaryOp::Add, sum, ast::binary(BinaryOp::Mul, ast::number(rotation[i][j]), old[j]));
    }
    def.components[i] = sum;
    def.sources[i] = to_string(sum);
  }
  def.name += "[moved]";
  return ImmersionSpec(std::move(def));
}

}  // namespace umbilic
