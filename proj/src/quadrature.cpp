#include "umbilic/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <stdexcept>

#include "quadrature_layout.hpp"

namespace umbilic {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    comp_ += (sum_ - t) + x;
  } else {
    comp_ += (x - t) + sum_;
  }
  sum_ = t;
}

void GridSpec::validate() const {
  if (nu < 16 || nv < 16) throw InvalidInput("grid needs at least 16 cells per axis");
  if (adaptive_depth < 0 || adaptive_depth > 12) throw InvalidInput("adaptive_depth must lie in [0, 12]");
}

GridSpec GridSpec::scaled(double factor) const {
  return {static_cast<int>(std::lround(nu * factor)), static_cast<int>(std::lround(nv * factor)), adaptive_depth};
}

namespace {

using quadrature_detail::Layout;

struct Node {
  double density = 0.0;  // sqrt(det g)
  double hring_norm2 = 0.0;
  double nabla_hring_norm2 = 0.0;
  double gradH_norm2 = 0.0;
  double R = 0.0;
  double H = 0.0;
  double field = 0.0;
};

class Sampler {
 public:
  Sampler(const ImmersionSpec& spec, const Layout& layout, const PointField* field)
      : spec_(spec), layout_(layout), field_(field) {}

  Node center(double u, double v) const {
    const PointGeometry pg = point_geometry(spec_, u, v, 3);
    Node n;
    n.density = std::sqrt(pg.det_g());
    n.hring_norm2 = pg.hring_norm2;
    n.nabla_hring_norm2 = pg.nabla_hring_norm2;
    n.gradH_norm2 = pg.gradH_norm2;
    n.R = pg.R;
    n.H = pg.H;
    if (field_) n.field = (*field_)(pg);
    return n;
  }

  double corner(double u, double v) const {
    return hring_norm2_at(spec_, layout_.clamp_u(u), layout_.clamp_v(v));
  }

 private:
  const ImmersionSpec& spec_;
  const Layout& layout_;
  const PointField* field_;
};

// Corner order: (u0, v0), (u1, v0), (u0, v1), (u1, v1).
using Corners = std::array<double, 4>;

template <class Leaf>
void walk(const Sampler& s, double eps2, int depth_left, double u0, double v0, double du, double dv,
          const Corners& corners, const Node& center, Leaf& leaf) {
  const bool inside = center.hring_norm2 < eps2;
  bool straddles = false;
  for (double c : corners) straddles = straddles || ((c < eps2) != inside);
  if (!straddles || depth_left == 0) {
    leaf(center, du * dv, inside);
    return;
  }
  const double hu = 0.5 * du;
  const double hv = 0.5 * dv;
  const double mid = center.hring_norm2;
  const double bottom = s.corner(u0 + hu, v0);
  const double top = s.corner(u0 + hu, v0 + dv);
  const double left = s.corner(u0, v0 + hv);
  const double right = s.corner(u0 + du, v0 + hv);
  const std::array<Corners, 4> child_corners{{{corners[0], bottom, left, mid},
                                              {bottom, corners[1], mid, right},
                                              {left, mid, corners[2], top},
                                              {mid, right, top, corners[3]}}};
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      const double cu = u0 + a * hu;
      const double cv = v0 + b * hv;
      const Node child = s.center(cu + 0.5 * hu, cv + 0.5 * hv);
      walk(s, eps2, depth_left - 1, cu, cv, hu, hv, child_corners[static_cast<std::size_t>(2 * b + a)], child, leaf);
    }
  }
}

// Runs body(i) for every row, in parallel when asked; rethrows the error of
// the lowest failing row so failures are deterministic too.
template <class Body>
void for_each_row(int rows, Execution exec, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(rows));
  const bool parallel = exec == Execution::Parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < rows; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct BaseGrid {
  std::vector<Node> centers;   // [i * nv + j]
  std::vector<double> corners; // [i * (nv + 1) + j]
};

BaseGrid evaluate_base(const Sampler& s, const Layout& L, bool with_corners, Execution exec) {
  BaseGrid g;
  g.centers.resize(static_cast<std::size_t>(L.nu) * static_cast<std::size_t>(L.nv));
  if (with_corners) g.corners.resize(static_cast<std::size_t>(L.nu + 1) * static_cast<std::size_t>(L.nv + 1));
  const int rows = with_corners ? L.nu + 1 : L.nu;
  for_each_row(rows, exec, [&](int i) {
    if (i < L.nu) {
      for (int j = 0; j < L.nv; ++j) g.centers[L.center_index(i, j)] = s.center(L.center_u(i), L.center_v(j));
    }
    if (with_corners) {
      for (int j = 0; j <= L.nv; ++j) g.corners[L.corner_index(i, j)] = s.corner(L.edge_u(i), L.edge_v(j));
    }
  });
  return g;
}

Corners cell_corners(const BaseGrid& g, const Layout& L, int i, int j) {
  return {g.corners[L.corner_index(i, j)], g.corners[L.corner_index(i + 1, j)], g.corners[L.corner_index(i, j + 1)],
          g.corners[L.corner_index(i + 1, j + 1)]};
}

constexpr int kRegionFields = 6;

struct RowSums {
  std::array<CompensatedSum, kRegionFields> inside;
  double max_gradH = 0.0;
  double max_cond2 = -INFINITY;
  std::size_t count = 0;
  double h_sup = 0.0;
};

}  // namespace

double integrate(const ImmersionSpec& spec, const PointField& field, const GridSpec& grid, const Region& region,
                 Execution exec) {
  grid.validate();
  if (region.kind != Region::Kind::All && !region.eps) throw InvalidInput("level-set region needs eps");
  const Layout L(spec, grid);
  const Sampler s(spec, L, &field);
  const bool refined = region.eps.has_value();
  const double eps2 = refined ? *region.eps * *region.eps : 0.0;
  const BaseGrid base = evaluate_base(s, L, refined, exec);

  std::vector<double> row_values(static_cast<std::size_t>(L.nu), 0.0);
  for_each_row(L.nu, exec, [&](int i) {
    CompensatedSum sum;
    auto leaf = [&](const Node& n, double cell_area, bool inside) {
      const bool keep = region.kind == Region::Kind::All || (region.kind == Region::Kind::Sublevel) == inside;
      if (keep) sum.add(n.field * n.density * cell_area);
    };
    for (int j = 0; j < L.nv; ++j) {
      const Node& c = base.centers[L.center_index(i, j)];
      if (!refined) {
        sum.add(c.field * c.density * L.cell_area());
      } else {
        walk(s, eps2, grid.adaptive_depth, L.edge_u(i), L.edge_v(j), L.du, L.dv, cell_corners(base, L, i, j), c, leaf);
      }
    }
    row_values[static_cast<std::size_t>(i)] = sum.value();
  });
  CompensatedSum total;
  for (double r : row_values) total.add(r);
  return total.value();
}

std::vector<RegionIntegrals> region_integrals(const ImmersionSpec& spec, const std::vector<double>& eps_list,
                                              const GridSpec& grid, Execution exec) {
  grid.validate();
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0 && eps_list[k] <= 1.0)) throw InvalidInput("eps values must lie in (0, 1]");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1])) throw InvalidInput("eps values must be sorted descending");
  }
  const Layout L(spec, grid);
  const Sampler s(spec, L, nullptr);
  const BaseGrid base = evaluate_base(s, L, true, exec);

  CompensatedSum area, total_R;
  double h_sup = 0.0;
  for (int i = 0; i < L.nu; ++i) {
    CompensatedSum row_area, row_R;
    for (int j = 0; j < L.nv; ++j) {
      const Node& c = base.centers[L.center_index(i, j)];
      row_area.add(c.density * L.cell_area());
      row_R.add(c.R * c.density * L.cell_area());
      h_sup = std::max(h_sup, std::abs(c.H));
    }
    area.add(row_area.value());
    total_R.add(row_R.value());
  }

  std::vector<RegionIntegrals> out;
  for (double eps : eps_list) {
    const double eps2 = eps * eps;
    std::vector<RowSums> rows(static_cast<std::size_t>(L.nu));
    for_each_row(L.nu, exec, [&](int i) {
      RowSums& r = rows[static_cast<std::size_t>(i)];
      auto leaf = [&](const Node& n, double cell_area, bool inside) {
        r.h_sup = std::max(r.h_sup, std::abs(n.H));
        if (!inside) return;
        const double w = n.density * cell_area;
        const double s2 = n.hring_norm2;
        r.inside[0].add(w);
        r.inside[1].add(n.nabla_hring_norm2 * s2 * w);
        r.inside[2].add(n.gradH_norm2 * s2 * w);
        r.inside[3].add(n.gradH_norm2 * w);
        r.inside[4].add(n.R * w);
        r.inside[5].add(n.R * s2 * s2 * w);
        r.max_gradH = std::max(r.max_gradH, n.gradH_norm2);
        r.max_cond2 = std::max(r.max_cond2, n.gradH_norm2 - 2.0 * n.nabla_hring_norm2);
        ++r.count;
      };
      for (int j = 0; j < L.nv; ++j) {
        walk(s, eps2, grid.adaptive_depth, L.edge_u(i), L.edge_v(j), L.du, L.dv, cell_corners(base, L, i, j),
             base.centers[L.center_index(i, j)], leaf);
      }
    });

    std::array<CompensatedSum, kRegionFields> sums;
    RegionIntegrals ri;
    ri.eps = eps;
    ri.max_cond2_excess = -INFINITY;
    for (const RowSums& r : rows) {
      for (int f = 0; f < kRegionFields; ++f) sums[static_cast<std::size_t>(f)].add(r.inside[static_cast<std::size_t>(f)].value());
      ri.max_gradH_norm2 = std::max(ri.max_gradH_norm2, r.max_gradH);
      ri.max_cond2_excess = std::max(ri.max_cond2_excess, r.max_cond2);
      ri.inside_nodes += r.count;
      h_sup = std::max(h_sup, r.h_sup);
    }
    if (ri.inside_nodes == 0) ri.max_cond2_excess = 0.0;
    ri.vol_omega_c = sums[0].value();
    ri.I_grad_hring = sums[1].value();
    ri.I_grad_H = sums[2].value();
    ri.I_grad_H_plain = sums[3].value();
    ri.I_R = sums[4].value();
    ri.I_R_hring4 = sums[5].value();
    out.push_back(ri);
  }
  for (RegionIntegrals& ri : out) {
    ri.area = area.value();
    ri.total_R = total_R.value();
    ri.H_sup = h_sup;
  }
  return out;
}

EulerCharacteristic euler_characteristic(const ImmersionSpec& spec, const GridSpec& grid, Execution exec) {
  EulerCharacteristic e;
  e.total_R = integrate(spec, [](const PointGeometry& pg) { return pg.R; }, grid, Region::all(), exec);
  e.area = integrate(spec, [](const PointGeometry&) { return 1.0; }, grid, Region::all(), exec);
  e.estimate = e.total_R / (4.0 * std::numbers::pi);
  e.rounded = static_cast<int>(std::lround(e.estimate));
  e.warning = std::abs(e.estimate - e.rounded) > 0.05;
  return e;
}

RichardsonEstimate richardson(double coarse, double mid, double fine) {
  const double d1 = std::abs(mid - coarse);
  const double d2 = std::abs(fine - mid);
  RichardsonEstimate r;
  if (d2 == 0.0) {
    r.unstable = false;
    r.error = 0.0;
    return r;
  }
  if (d1 > d2) {
    const double p = std::log2(d1 / d2);
    r.order = p;
    r.error = d2 / (std::exp2(p) - 1.0);
    r.unstable = false;
    return r;
  }
  r.error = std::max(d1, d2);
  return r;
}

std::vector<ConvergenceRow> convergence_study(const ImmersionSpec& spec, const PointField& field,
                                              const Region& region, const std::vector<GridSpec>& grids,
                                              Execution exec) {
  if (grids.size() < 3) throw InvalidInput("convergence study needs at least three grid levels");
  for (std::size_t k = 1; k < grids.size(); ++k) {
    if (grids[k].nu != 2 * grids[k - 1].nu || grids[k].nv != 2 * grids[k - 1].nv) {
      throw InvalidInput("each convergence level must double nu and nv");
    }
  }
  std::vector<ConvergenceRow> rows;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    ConvergenceRow row;
    row.grid = grids[k];
    row.value = integrate(spec, field, grids[k], region, exec);
    if (k == 1) row.error_estimate = std::abs(row.value - rows[0].value);
    if (k >= 2) {
      const RichardsonEstimate est = richardson(rows[k - 2].value, rows[k - 1].value, row.value);
      row.order = est.order;
      row.error_estimate = est.error;
      row.unstable = est.unstable;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace umbilic
