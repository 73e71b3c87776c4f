#include "umbilic/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace umbilic {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kEightPi = 8.0 * std::numbers::pi;
constexpr double kPlateauSpread = 1e-3;
constexpr double kPlateauFloor = 1e-12;
constexpr double kHsupStability = 1e-3;

struct Terms {
  double term1;
  double term2;
  double cond3;
};

Terms scaled_terms(const RegionIntegrals& ri) {
  const double e2 = ri.eps * ri.eps;
  const double e4 = e2 * e2;
  return {2.0 * ri.I_grad_hring / e4, ri.I_grad_H / e4, ri.I_grad_H_plain / e2};
}

std::vector<double> merged_eps(const std::vector<double>& ladder, std::optional<double> extra) {
  std::vector<double> all = ladder;
  if (extra) all.push_back(*extra);
  std::sort(all.begin(), all.end(), std::greater<>());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

const RegionIntegrals& find_eps(const std::vector<RegionIntegrals>& list, double eps) {
  for (const auto& ri : list) {
    if (ri.eps == eps) return ri;
  }
  throw std::logic_error("eps missing from region integrals");
}

CorollaryReport corollary_from(const std::vector<RegionIntegrals>& integrals, double eps0,
                               const std::vector<double>& ladder, int chi_rounded, double pointwise_tol) {
  CorollaryReport cr;
  cr.eps0 = eps0;
  cr.chi_rounded = chi_rounded;
  cr.pointwise_tol = pointwise_tol;
  if (chi_rounded != 2) {
    std::ostringstream msg;
    msg << "the corollary concerns immersed spheres (chi = 2); this surface has chi = " << chi_rounded;
    cr.refusal = msg.str();
    return cr;
  }
  const RegionIntegrals& at0 = find_eps(integrals, eps0);
  cr.region_empty = at0.inside_nodes == 0;
  cr.cond1_max_gradH_norm2 = at0.max_gradH_norm2;
  cr.cond2_max_excess = at0.max_cond2_excess;
  cr.cond1_holds = !cr.region_empty && cr.cond1_max_gradH_norm2 < pointwise_tol;
  cr.cond2_holds = !cr.region_empty && cr.cond2_max_excess <= pointwise_tol;

  for (double eps : ladder) {
    cr.ladder_eps.push_back(eps);
    cr.ladder_cond3.push_back(scaled_terms(find_eps(integrals, eps)).cond3);
  }
  cr.cond3_trend = classify_trend(cr.ladder_cond3);
  const bool below = std::all_of(cr.ladder_cond3.begin(), cr.ladder_cond3.end(),
                                 [](double x) { return x < kEightPi; });
  cr.cond3_holds = below && (cr.cond3_trend == "decreasing" || cr.cond3_trend == "plateau");
  cr.implies_positive_umbilic_measure = cr.cond1_holds || cr.cond2_holds || cr.cond3_holds;
  return cr;
}

}  // namespace

std::string classify_trend(const std::vector<double>& values) {
  if (values.size() < 2) return "plateau";
  bool down = true;
  bool up = true;
  double lo = values.front(), hi = values.front(), mag = 0.0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) down = false;
    if (!(values[i] > values[i - 1])) up = false;
  }
  for (double x : values) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    mag = std::max(mag, std::abs(x));
  }
  if (hi - lo <= kPlateauSpread * mag + kPlateauFloor) return "plateau";
  if (down) return "decreasing";
  if (up) return "increasing";
  return "non-monotone";
}

double theorem_constant(double H_sup, double c) { return 0.5 * H_sup * H_sup + 4.0 * std::abs(c) + 1.0; }

void validate_ladder(const std::vector<double>& eps_ladder) {
  if (eps_ladder.empty()) throw InvalidInput("empty eps ladder");
  for (std::size_t i = 0; i < eps_ladder.size(); ++i) {
    const double e = eps_ladder[i];
    if (!(e > 0.0) || e > 1.0) {
      throw InvalidInput("eps = " + std::to_string(e) + " is outside (0, 1], where the constant C is valid");
    }
    if (i > 0 && !(e < eps_ladder[i - 1])) throw InvalidInput("eps ladder must be strictly decreasing");
  }
}

TheoremReport verify_prel(const ImmersionSpec& spec, const std::vector<double>& eps_ladder,
                          const VerifyOptions& options) {
  validate_ladder(eps_ladder);
  options.grid.validate();
  if (options.corollary_eps0 && (!(*options.corollary_eps0 > 0.0) || *options.corollary_eps0 > 1.0)) {
    throw InvalidInput("eps0 must lie in (0, 1]");
  }
  if (options.hsup_override && !(*options.hsup_override >= 0.0)) {
    throw InvalidInput("H_sup override must be non-negative");
  }
  if (options.tol_margin && !(*options.tol_margin > 0.0)) throw InvalidInput("margin tolerance must be positive");

  TheoremReport rep;
  rep.surface = spec.name();
  rep.params = spec.params();
  rep.c = spec.ambient_c();
  rep.grid = options.grid;

  const std::vector<double> eps_all = merged_eps(eps_ladder, options.corollary_eps0);
  const std::vector<RegionIntegrals> fine = region_integrals(spec, eps_all, options.grid, options.exec);

  const RegionIntegrals& any = fine.front();
  rep.chi.total_R = any.total_R;
  rep.chi.area = any.area;
  rep.chi.estimate = any.total_R / kFourPi;
  rep.chi.rounded = static_cast<int>(std::lround(rep.chi.estimate));
  rep.chi.warning = std::abs(rep.chi.estimate - rep.chi.rounded) > 0.05;
  if (rep.chi.warning) {
    rep.warnings.push_back("Euler characteristic estimate " + std::to_string(rep.chi.estimate) +
                           " is not within 0.05 of an integer");
  }

  rep.H_sup_overridden = options.hsup_override.has_value();
  rep.H_sup = options.hsup_override.value_or(any.H_sup);
  rep.C_const = theorem_constant(rep.H_sup, rep.c);
  const double top = kFourPi * rep.chi.rounded;

  std::vector<std::vector<RegionIntegrals>> coarse;
  if (!options.tol_margin) {
    for (double f : {0.25, 0.5}) {
      const GridSpec g = options.grid.scaled(f);
      try {
        g.validate();
      } catch (const InvalidInput&) {
        throw InvalidInput("grid is too coarse to estimate the margin tolerance from grid/4; give a tolerance");
      }
      rep.tolerance_grids.push_back(g);
      coarse.push_back(region_integrals(spec, eps_ladder, g, options.exec));
    }
    const double h_mid = coarse[1].front().H_sup;
    rep.H_sup_change = any.H_sup > 0.0 ? std::abs(any.H_sup - h_mid) / any.H_sup : std::abs(any.H_sup - h_mid);
    if (*rep.H_sup_change > kHsupStability) {
      rep.warnings.push_back("H_sup changed by " + std::to_string(*rep.H_sup_change) +
                             " (relative) between the last two grids");
    }
  }

  rep.pass = true;
  for (std::size_t k = 0; k < eps_ladder.size(); ++k) {
    const RegionIntegrals& ri = find_eps(fine, eps_ladder[k]);
    const Terms t = scaled_terms(ri);
    TheoremRow row;
    row.eps = ri.eps;
    row.vol_omega_c = ri.vol_omega_c;
    row.lhs = rep.C_const * ri.vol_omega_c;
    row.term1 = t.term1;
    row.term2 = t.term2;
    row.rhs = t.term1 - t.term2 + top;
    row.margin = row.lhs - row.rhs;
    row.cond3_value = t.cond3;
    row.sharp_gap = t.term2 - t.term1 - top;
    if (ri.vol_omega_c > 0.0) row.min_C = row.rhs / ri.vol_omega_c;
    const double e4 = std::pow(ri.eps, 4);
    row.balance_residual = top + t.term1 - t.term2 - ri.I_R + ri.I_R_hring4 / e4;
    row.inside_nodes = ri.inside_nodes;

    if (options.tol_margin) {
      row.tol_margin = *options.tol_margin;
    } else {
      const Terms t0 = scaled_terms(coarse[0][k]);
      const Terms t1 = scaled_terms(coarse[1][k]);
      const double err =
          std::max({richardson(rep.C_const * coarse[0][k].vol_omega_c, rep.C_const * coarse[1][k].vol_omega_c,
                               row.lhs)
                        .error,
                    richardson(t0.term1, t1.term1, t.term1).error, richardson(t0.term2, t1.term2, t.term2).error});
      row.tol_margin = 3.0 * err;
    }
    if (!(row.margin >= -row.tol_margin)) rep.pass = false;
    rep.rows.push_back(row);
  }

  if (options.corollary_eps0) {
    rep.corollary = corollary_from(fine, *options.corollary_eps0, eps_ladder, rep.chi.rounded, options.pointwise_tol);
  }
  return rep;
}

CorollaryReport corollary_check(const ImmersionSpec& spec, double eps0, const std::vector<double>& eps_ladder,
                                const GridSpec& grid, Execution exec, double pointwise_tol) {
  validate_ladder(eps_ladder);
  if (!(eps0 > 0.0) || eps0 > 1.0) throw InvalidInput("eps0 must lie in (0, 1]");
  const std::vector<RegionIntegrals> integrals = region_integrals(spec, merged_eps(eps_ladder, eps0), grid, exec);
  const int chi = static_cast<int>(std::lround(integrals.front().total_R / kFourPi));
  return corollary_from(integrals, eps0, eps_ladder, chi, pointwise_tol);
}

SharpnessReport sharpness_gap(const ImmersionSpec& spec, const std::vector<double>& eps_ladder,
                              const GridSpec& grid, Execution exec) {
  if (spec.name() != "ellipsoid_rev") {
    throw InvalidInput("the sharpness gap is defined for the ellipsoid_rev preset, got '" + spec.name() + "'");
  }
  validate_ladder(eps_ladder);
  SharpnessReport rep;
  rep.a = spec.params().at("a");
  rep.b = spec.params().at("b");
  if (std::abs(rep.a - rep.b) < kSphericalGuard) {
    throw InvalidInput("ellipsoid_rev with |a - b| < 1e-3 is numerically a sphere; every term of the gap vanishes");
  }
  std::vector<double> magnitudes;
  for (const RegionIntegrals& ri : region_integrals(spec, eps_ladder, grid, exec)) {
    const Terms t = scaled_terms(ri);
    SharpnessRow row;
    row.eps = ri.eps;
    row.term1 = t.term1;
    row.term2 = t.term2;
    row.sharp_gap = t.term2 - t.term1 - kEightPi;
    row.normalized_gap = t.term2 > 0.0 ? row.sharp_gap / t.term2 : std::numeric_limits<double>::quiet_NaN();
    magnitudes.push_back(std::abs(row.normalized_gap));
    rep.rows.push_back(row);
  }
  rep.trend = classify_trend(magnitudes);
  return rep;
}

}  // namespace umbilic
