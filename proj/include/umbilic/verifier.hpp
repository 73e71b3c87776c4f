#pragma once

// Numerical check of the umbilic-set volume estimate
//
//   C Vol(Omega^c_eps) >= (2/eps^4) int |nabla hring|^2 |hring|^2
//                         - (1/eps^4) int |nabla H|^2 |hring|^2 + 4 pi chi(M),
//   C = 1/2 ||H||_inf^2 + 4|c| + 1,  eps <= 1,
//
// together with the three sufficient conditions for Vol(Omega^c_0) > 0 on
// spheres and the equality case on ellipsoids of revolution.

#include <optional>
#include <string>
#include <vector>

#include "umbilic/immersion.hpp"
#include "umbilic/quadrature.hpp"

namespace umbilic {

struct TheoremRow {
  double eps = 0.0;
  double vol_omega_c = 0.0;
  double lhs = 0.0;          // C * vol
  double term1 = 0.0;        // 2/eps^4 int |nabla hring|^2 |hring|^2
  double term2 = 0.0;        // 1/eps^4 int |nabla H|^2 |hring|^2
  double rhs = 0.0;          // term1 - term2 + 4 pi chi
  double margin = 0.0;       // lhs - rhs
  double cond3_value = 0.0;  // 1/eps^2 int |nabla H|^2
  double sharp_gap = 0.0;    // term2 - term1 - 4 pi chi
  double tol_margin = 0.0;
  /// rhs / vol, the smallest constant that would do on this row; empty if vol = 0.
  std::optional<double> min_C;
  /// 4 pi chi + term1 - term2 - int R + 1/eps^4 int R |hring|^4, zero for exact integrals.
  double balance_residual = 0.0;
  std::size_t inside_nodes = 0;
};

struct CorollaryReport {
  double eps0 = 0.0;
  int chi_rounded = 0;
  /// Set when chi != 2: the conditions are only stated for spheres.
  std::optional<std::string> refusal;

  // Condition 1: H constant on Omega^c_eps0, read as max |nabla H|^2 < pointwise_tol.
  double cond1_max_gradH_norm2 = 0.0;
  bool cond1_holds = false;
  // Condition 2: |nabla H|^2 <= 2 |nabla hring|^2 on Omega^c_eps0.
  double cond2_max_excess = 0.0;
  bool cond2_holds = false;
  /// Both pointwise conditions are vacuous, and not counted, when Omega^c_eps0 has no nodes.
  bool region_empty = true;

  // Condition 3: limsup 1/eps^2 int |nabla H|^2 < 8 pi, reported as a ladder.
  std::vector<double> ladder_eps;
  std::vector<double> ladder_cond3;
  std::string cond3_trend;
  bool cond3_holds = false;

  bool implies_positive_umbilic_measure = false;
  double pointwise_tol = 1e-10;
};

struct VerifyOptions {
  GridSpec grid;
  Execution exec = Execution::Parallel;
  /// Replaces the node maximum of |H| in C.
  std::optional<double> hsup_override;
  /// Fixed margin tolerance; otherwise 3x the Richardson error of the
  /// largest of lhs, term1, term2 over grid/4, grid/2, grid.
  std::optional<double> tol_margin;
  /// Also evaluate the corollary at this eps0.
  std::optional<double> corollary_eps0;
  double pointwise_tol = 1e-10;
};

struct TheoremReport {
  std::string surface;
  ParamTable params;
  double c = 0.0;
  EulerCharacteristic chi;
  double H_sup = 0.0;
  bool H_sup_overridden = false;
  /// |H_sup(grid) - H_sup(grid/2)| / H_sup(grid); empty without tolerance levels.
  std::optional<double> H_sup_change;
  double C_const = 0.0;
  GridSpec grid;
  std::vector<GridSpec> tolerance_grids;
  std::vector<TheoremRow> rows;
  std::optional<CorollaryReport> corollary;
  std::vector<std::string> warnings;
  bool pass = false;

  std::string verdict() const { return pass ? "PASS" : "FAIL"; }
};

/// Sign-pattern label for a sequence read in ladder order:
/// "decreasing", "increasing", "plateau" or "non-monotone". A spread below
/// 1e-3 of the largest magnitude (plus 1e-12 absolute) is a plateau.
std::string classify_trend(const std::vector<double>& values);

/// 1/2 H_sup^2 + 4|c| + 1.
double theorem_constant(double H_sup, double c);

/// Throws InvalidInput unless eps values lie in (0, 1] and strictly decrease.
void validate_ladder(const std::vector<double>& eps_ladder);

TheoremReport verify_prel(const ImmersionSpec& spec, const std::vector<double>& eps_ladder,
                          const VerifyOptions& options = {});

CorollaryReport corollary_check(const ImmersionSpec& spec, double eps0, const std::vector<double>& eps_ladder,
                                const GridSpec& grid, Execution exec = Execution::Parallel,
                                double pointwise_tol = 1e-10);

struct SharpnessRow {
  double eps = 0.0;
  double term1 = 0.0;
  double term2 = 0.0;
  double sharp_gap = 0.0;
  double normalized_gap = 0.0;  // sharp_gap / term2
};

struct SharpnessReport {
  double a = 0.0;
  double b = 0.0;
  std::vector<SharpnessRow> rows;
  /// Trend of |normalized_gap| along the ladder. A finite ladder shows a
  /// trend, never the limit itself.
  std::string trend;
};

/// Smallest |a - b| accepted by sharpness_gap.
inline constexpr double kSphericalGuard = 1e-3;

/// Equality case on an ellipsoid_rev preset; rejects nearly spherical parameters.
SharpnessReport sharpness_gap(const ImmersionSpec& spec, const std::vector<double>& eps_ladder,
                              const GridSpec& grid, Execution exec = Execution::Parallel);

}  // namespace umbilic
