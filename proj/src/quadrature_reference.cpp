// Serial reference quadrature. Deliberately naive: every cell evaluates its
// own corners, nothing is cached, sums are plain doubles.

#include <algorithm>
#include <cmath>

#include "quadrature_layout.hpp"
#include "umbilic/quadrature.hpp"

namespace umbilic::reference {

namespace {

using quadrature_detail::Layout;

struct Leaf {
  PointGeometry pg;
  double area;
  bool inside;
};

template <class Visit>
void refine(const ImmersionSpec& spec, const Layout& L, double eps2, int depth_left, double u0, double v0, double du,
            double dv, Visit& visit) {
  const PointGeometry center = point_geometry(spec, u0 + 0.5 * du, v0 + 0.5 * dv, 3);
  const bool inside = center.hring_norm2 < eps2;
  bool cut = false;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double s = hring_norm2_at(spec, L.clamp_u(u0 + a * du), L.clamp_v(v0 + b * dv));
      if ((s < eps2) != inside) cut = true;
    }
  }
  if (!cut || depth_left == 0) {
    visit(Leaf{center, du * dv, inside});
    return;
  }
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 2; ++a) {
      refine(spec, L, eps2, depth_left - 1, u0 + a * 0.5 * du, v0 + b * 0.5 * dv, 0.5 * du, 0.5 * dv, visit);
    }
  }
}

}  // namespace

double integrate(const ImmersionSpec& spec, const PointField& field, const GridSpec& grid, const Region& region) {
  grid.validate();
  const Layout L(spec, grid);
  double total = 0.0;
  for (int i = 0; i < L.nu; ++i) {
    for (int j = 0; j < L.nv; ++j) {
      if (!region.eps) {
        const PointGeometry pg = point_geometry(spec, L.center_u(i), L.center_v(j), 3);
        total += field(pg) * std::sqrt(pg.det_g()) * L.cell_area();
        continue;
      }
      auto visit = [&](const Leaf& leaf) {
        const bool keep = region.kind == Region::Kind::All || (region.kind == Region::Kind::Sublevel) == leaf.inside;
        if (keep) total += field(leaf.pg) * std::sqrt(leaf.pg.det_g()) * leaf.area;
      };
      refine(spec, L, *region.eps * *region.eps, grid.adaptive_depth, L.edge_u(i), L.edge_v(j), L.du, L.dv, visit);
    }
  }
  return total;
}

std::vector<RegionIntegrals> region_integrals(const ImmersionSpec& spec, const std::vector<double>& eps_list,
                                              const GridSpec& grid) {
  grid.validate();
  const Layout L(spec, grid);
  double area = 0.0, total_R = 0.0, h_sup = 0.0;
  for (int i = 0; i < L.nu; ++i) {
    for (int j = 0; j < L.nv; ++j) {
      const PointGeometry pg = point_geometry(spec, L.center_u(i), L.center_v(j), 3);
      const double w = std::sqrt(pg.det_g()) * L.cell_area();
      area += w;
      total_R += pg.R * w;
      h_sup = std::max(h_sup, std::abs(pg.H));
    }
  }
  std::vector<RegionIntegrals> out;
  for (double eps : eps_list) {
    RegionIntegrals ri;
    ri.eps = eps;
    double max_cond2 = -INFINITY;
    auto visit = [&](const Leaf& leaf) {
      const PointGeometry& pg = leaf.pg;
      h_sup = std::max(h_sup, std::abs(pg.H));
      if (!leaf.inside) return;
      const double w = std::sqrt(pg.det_g()) * leaf.area;
      const double s2 = pg.hring_norm2;
      ri.vol_omega_c += w;
      ri.I_grad_hring += pg.nabla_hring_norm2 * s2 * w;
      ri.I_grad_H += pg.gradH_norm2 * s2 * w;
      ri.I_grad_H_plain += pg.gradH_norm2 * w;
      ri.I_R += pg.R * w;
      ri.I_R_hring4 += pg.R * s2 * s2 * w;
      ri.max_gradH_norm2 = std::max(ri.max_gradH_norm2, pg.gradH_norm2);
      max_cond2 = std::max(max_cond2, pg.gradH_norm2 - 2.0 * pg.nabla_hring_norm2);
      ++ri.inside_nodes;
    };
    for (int i = 0; i < L.nu; ++i) {
      for (int j = 0; j < L.nv; ++j) {
        refine(spec, L, eps * eps, grid.adaptive_depth, L.edge_u(i), L.edge_v(j), L.du, L.dv, visit);
      }
    }
    ri.max_cond2_excess = ri.inside_nodes == 0 ? 0.0 : max_cond2;
    out.push_back(ri);
  }
  for (RegionIntegrals& ri : out) {
    ri.area = area;
    ri.total_R = total_R;
    ri.H_sup = h_sup;
  }
  return out;
}

}  // namespace umbilic::reference
