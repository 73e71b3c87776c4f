#pragma once

#include <algorithm>
#include <cstddef>

#include "umbilic/immersion.hpp"
#include "umbilic/quadrature.hpp"

namespace umbilic::quadrature_detail {

// Cell geometry of the sampled chart rectangle. Corner samples on a
// non-periodic edge are pulled inside by a small fraction of a cell so that
// degenerate chart boundaries (poles) are never evaluated.
struct Layout {
  Layout(const ImmersionSpec& spec, const GridSpec& grid)
      : su(spec.sample_u()),
        sv(spec.sample_v()),
        nu(grid.nu),
        nv(grid.nv),
        du(su.length() / grid.nu),
        dv(sv.length() / grid.nv),
        periodic_u(spec.definition().periodic_u),
        periodic_v(spec.definition().periodic_v) {}

  Interval su;
  Interval sv;
  int nu;
  int nv;
  double du;
  double dv;
  bool periodic_u;
  bool periodic_v;

  static constexpr double kInset = 1.0 / 256.0;

  double cell_area() const { return du * dv; }
  double edge_u(int i) const { return su.lo + i * du; }
  double edge_v(int j) const { return sv.lo + j * dv; }
  double center_u(int i) const { return su.lo + (i + 0.5) * du; }
  double center_v(int j) const { return sv.lo + (j + 0.5) * dv; }

  double clamp_u(double u) const {
    return periodic_u ? u : std::clamp(u, su.lo + kInset * du, su.hi - kInset * du);
  }
  double clamp_v(double v) const {
    return periodic_v ? v : std::clamp(v, sv.lo + kInset * dv, sv.hi - kInset * dv);
  }

  std::size_t center_index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nv) + static_cast<std::size_t>(j);
  }
  std::size_t corner_index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(nv + 1) + static_cast<std::size_t>(j);
  }
};

}  // namespace umbilic::quadrature_detail
