#include "umbilic/identity_suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace umbilic {

namespace {

void record(ResidualStats& s, const Residual& r, ChartPoint at) {
  const double n = r.normalized();
  if (!(n <= s.max_normalized)) {
    s.max_normalized = n;
    s.worst = at;
  }
  s.mean_normalized += n;
  s.max_value = std::max(s.max_value, r.value);
}

}  // namespace

bool IdentitySuiteResult::pass() const {
  return std::all_of(residuals.begin(), residuals.end(), [](const ResidualStats& s) { return s.pass; });
}

std::vector<ChartPoint> sample_points(const ImmersionSpec& spec, int count, std::uint64_t seed) {
  if (count < 1) throw InvalidInput("need at least one sample point");
  const Interval su = spec.sample_u();
  const Interval sv = spec.sample_v();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> du(su.lo, su.hi);
  std::uniform_real_distribution<double> dv(sv.lo, sv.hi);
  std::vector<ChartPoint> out(static_cast<std::size_t>(count));
  for (ChartPoint& p : out) {
    p.u = du(rng);
    p.v = dv(rng);
  }
  return out;
}

Residual gauss_consistency(const PointGeometry& pg) {
  return {std::abs(pg.R - intrinsic_scalar_curvature(pg)),
          0.5 * pg.H * pg.H + pg.hring_norm2 + 2.0 * std::abs(pg.c)};
}

IdentitySuiteResult run_identity_suite(const ImmersionSpec& spec, const IdentitySuiteOptions& options) {
  if (!(options.identity_tol > 0.0) || !(options.bochner_tol > 0.0) || !(options.gauss_tol > 0.0)) {
    throw InvalidInput("tolerances must be positive");
  }
  IdentitySuiteResult res;
  res.points = sample_points(spec, options.points, options.seed);
  res.residuals = {{"codazzi", options.identity_tol},   {"divergence", options.identity_tol},
                   {"smoczyk", options.identity_tol},   {"norm_split", options.identity_tol},
                   {"bochner", options.bochner_tol},    {"gauss", options.gauss_tol}};
  for (const ChartPoint& p : res.points) {
    const PointGeometry pg = point_geometry(spec, p.u, p.v, 4);
    const IdentityResiduals ir = identity_residuals(pg);
    const BochnerResidual br = bochner_residual(spec, p.u, p.v);
    record(res.residuals[0], ir.codazzi, p);
    record(res.residuals[1], ir.divergence, p);
    record(res.residuals[2], ir.smoczyk, p);
    record(res.residuals[3], ir.norm_split, p);
    const Residual& worse = br.laplacian.normalized() >= br.bochner.normalized() ? br.laplacian : br.bochner;
    record(res.residuals[4], worse, p);
    record(res.residuals[5], gauss_consistency(pg), p);
  }
  for (ResidualStats& s : res.residuals) {
    s.mean_normalized /= static_cast<double>(res.points.size());
    s.pass = s.max_normalized < s.tolerance;
  }
  return res;
}

}  // namespace umbilic
