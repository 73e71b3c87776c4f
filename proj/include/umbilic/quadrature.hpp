#pragma once

// Midpoint-rule integration over a chart, with recursive refinement of the
// cells cut by the level curve |hring| = eps.
//
// A cell is refined when the sign of |hring| - eps differs among its four
// corners and its center; leaves still cut at the maximum depth are classified
// by their center. The sublevel set {|hring| < eps} is strict, so ties go to
// the superlevel side. Row sums are compensated and combined in a fixed
// order, so results are bit-identical for any OpenMP thread count.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "umbilic/geometry.hpp"
#include "umbilic/immersion.hpp"

namespace umbilic {

struct GridSpec {
  int nu = 256;
  int nv = 256;
  /// Maximum number of recursive subdivisions at the |hring| = eps interface.
  int adaptive_depth = 6;

  void validate() const;
  GridSpec scaled(double factor) const;
};

enum class Execution { Parallel, Serial };

struct Region {
  enum class Kind { All, Sublevel, Superlevel };
  Kind kind = Kind::All;
  /// Interface level. For Kind::All it is optional and only selects the
  /// refined node set, so that all = sublevel + superlevel on identical nodes.
  std::optional<double> eps;

  static Region all() { return {}; }
  static Region all_refined_at(double eps) { return {Kind::All, eps}; }
  static Region sublevel(double eps) { return {Kind::Sublevel, eps}; }
  static Region superlevel(double eps) { return {Kind::Superlevel, eps}; }
};

using PointField = std::function<double(const PointGeometry&)>;

/// Integral of field * dA over the region.
double integrate(const ImmersionSpec& spec, const PointField& field, const GridSpec& grid, const Region& region,
                 Execution exec = Execution::Parallel);

/// Integrals over Omega^c_eps = {|hring| < eps} for one eps, plus surface totals.
struct RegionIntegrals {
  double eps = 0.0;
  double vol_omega_c = 0.0;     // Vol(Omega^c_eps)
  double I_grad_hring = 0.0;    // int |nabla hring|^2 |hring|^2
  double I_grad_H = 0.0;        // int |nabla H|^2 |hring|^2
  double I_grad_H_plain = 0.0;  // int |nabla H|^2
  double I_R = 0.0;             // int R
  double I_R_hring4 = 0.0;      // int R |hring|^4

  double area = 0.0;
  double total_R = 0.0;
  double H_sup = 0.0;

  // Over leaf centers inside Omega^c_eps.
  double max_gradH_norm2 = 0.0;
  double max_cond2_excess = 0.0;  // max |nabla H|^2 - 2 |nabla hring|^2
  std::size_t inside_nodes = 0;
};

/// One evaluation pass shared by all eps. eps_list must be sorted descending in (0, 1].
std::vector<RegionIntegrals> region_integrals(const ImmersionSpec& spec, const std::vector<double>& eps_list,
                                              const GridSpec& grid, Execution exec = Execution::Parallel);

struct EulerCharacteristic {
  double estimate = 0.0;  // (1 / 4 pi) int R dA
  int rounded = 0;
  bool warning = false;   // |estimate - rounded| > 0.05
  double total_R = 0.0;
  double area = 0.0;
};

EulerCharacteristic euler_characteristic(const ImmersionSpec& spec, const GridSpec& grid,
                                         Execution exec = Execution::Parallel);

/// Observed order from three successive values on grids refined by 2.
struct RichardsonEstimate {
  std::optional<double> order;  // empty when unstable
  double error = 0.0;           // |fine - mid| / (2^p - 1), or |fine - mid| when unstable
  bool unstable = true;
};

RichardsonEstimate richardson(double coarse, double mid, double fine);

struct ConvergenceRow {
  GridSpec grid;
  double value = 0.0;
  std::optional<double> order;
  std::optional<double> error_estimate;
  bool unstable = false;
};

/// At least three grids, each doubling nu and nv of the previous one.
std::vector<ConvergenceRow> convergence_study(const ImmersionSpec& spec, const PointField& field,
                                              const Region& region, const std::vector<GridSpec>& grids,
                                              Execution exec = Execution::Parallel);

/// Compensated (Neumaier) summation.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

namespace reference {

// Straightforward serial implementations kept as test oracles for the
// OpenMP kernels: no node caching, plain recursion, plain summation.
double integrate(const ImmersionSpec& spec, const PointField& field, const GridSpec& grid, const Region& region);
std::vector<RegionIntegrals> region_integrals(const ImmersionSpec& spec, const std::vector<double>& eps_list,
                                              const GridSpec& grid);

}  // namespace reference

}  // namespace umbilic
