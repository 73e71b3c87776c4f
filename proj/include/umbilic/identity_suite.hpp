#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "umbilic/geometry.hpp"
#include "umbilic/immersion.hpp"

namespace umbilic {

/// Statistics of one residual over a set of sample points. Residuals are
/// normalized as value / (1 + scale).
struct ResidualStats {
  std::string name;
  double tolerance = 0.0;
  double max_normalized = 0.0;
  double mean_normalized = 0.0;
  double max_value = 0.0;
  ChartPoint worst{};
  bool pass = true;
};

struct IdentitySuiteOptions {
  int points = 1000;
  std::uint64_t seed = 12345;
  double identity_tol = 1e-8;
  double bochner_tol = 1e-6;
  double gauss_tol = 1e-7;
};

struct IdentitySuiteResult {
  std::vector<ResidualStats> residuals;  // codazzi, divergence, smoczyk, norm_split, bochner, gauss
  std::vector<ChartPoint> points;
  bool pass() const;
};

/// Uniform samples of the sampled chart rectangle from a seeded mt19937_64.
std::vector<ChartPoint> sample_points(const ImmersionSpec& spec, int count, std::uint64_t seed);

/// Codazzi, divergence, Smoczyk and norm-split identities, the two Bochner
/// formulas and Gauss-equation consistency, at seeded random points.
IdentitySuiteResult run_identity_suite(const ImmersionSpec& spec, const IdentitySuiteOptions& options = {});

/// |R - R_intrinsic| with scale 1/2 H^2 + |hring|^2 + 2|c|.
Residual gauss_consistency(const PointGeometry& pg);

}  // namespace umbilic
