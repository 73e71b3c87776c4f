#pragma once

// Pointwise extrinsic and intrinsic geometry of an immersed surface in the
// conformal model of the space form F^3(c): ambient metric lambda(x)^2 times
// Euclidean, lambda(x) = 1 / (1 + c/4 |x|^2).
//
// Conventions worth knowing before reading any number produced here:
//   * H is the TRACE g^ij h_ij (sum of principal curvatures), not their mean.
//   * hring = h - (H/2) g is the trace-free part; |hring|^2 = hring_ij hring^ij.
//   * R is the scalar curvature (twice the Gauss curvature).
//   * The unit normal is the chart-induced one (d_u f x d_v f direction);
//     h, dh, H, gradH and nabla_hring flip sign with it, norms do not.

#include <array>

#include "umbilic/errors.hpp"
#include "umbilic/immersion.hpp"
#include "umbilic/jet.hpp"

namespace umbilic {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<Vec2, 2>;
/// t[k][i][j]; k is the derivative index where there is one.
using Tensor3 = std::array<Mat2, 2>;

struct AmbientModel {
  double c = 0.0;

  /// lambda(x).
  Jet2 conformal_factor(const std::array<Jet2, 3>& x) const;
  double conformal_factor(const std::array<double, 3>& x) const;
  /// d_k log lambda = -(c/2) lambda x_k.
  std::array<Jet2, 3> log_factor_gradient(const std::array<Jet2, 3>& x, const Jet2& lambda) const;
  /// Gamma-bar^k_ab X^a Y^b for the conformally flat connection.
  static std::array<Jet2, 3> connection(const std::array<Jet2, 3>& x_vec, const std::array<Jet2, 3>& y_vec,
                                        const std::array<Jet2, 3>& dlog);
};

enum class NormalSide { ChartInduced, Reversed };

struct PointGeometry {
  ChartPoint at;
  double c = 0.0;
  int order = 0;

  // fundamental_forms
  Mat2 g{};
  Mat2 g_inv{};
  Tensor3 dg{};                     // dg[k][i][j] = d_k g_ij
  std::array<Tensor3, 2> d2g{};     // d2g[l][k][i][j] = d_l d_k g_ij
  Mat2 h{};
  Tensor3 dh{};                     // dh[k][i][j] = d_k h_ij

  // covariant_data
  bool covariant_complete = false;
  Tensor3 christoffel{};            // christoffel[k][i][j] = Gamma^k_ij
  double H = 0.0;
  Mat2 hring{};
  double hring_norm2 = 0.0;
  Vec2 gradH{};
  double gradH_norm2 = 0.0;
  Tensor3 nabla_hring{};            // nabla_hring[k][i][j] = nabla_k hring_ij
  double nabla_hring_norm2 = 0.0;
  Tensor3 nabla_h{};
  double nabla_h_norm2 = 0.0;
  double R = 0.0;

  double det_g() const { return g[0][0] * g[1][1] - g[0][1] * g[1][0]; }
};

/// g, dg, d2g, h, dh at (u, v). Requires 3 <= order <= 4.
PointGeometry fundamental_forms(const ImmersionSpec& spec, double u, double v, int order = 3,
                                NormalSide side = NormalSide::ChartInduced);

/// Christoffel symbols, H, hring, gradients and their norms, R.
PointGeometry covariant_data(PointGeometry pg);

/// fundamental_forms followed by covariant_data.
PointGeometry point_geometry(const ImmersionSpec& spec, double u, double v, int order = 3,
                             NormalSide side = NormalSide::ChartInduced);

/// |hring|^2 alone, from second-order jets.
double hring_norm2_at(const ImmersionSpec& spec, double u, double v);

/// A residual together with the magnitude of the terms that should cancel in it.
struct Residual {
  double value = 0.0;
  double scale = 0.0;
  double normalized() const { return value / (1.0 + scale); }
};

struct IdentityResiduals {
  Residual codazzi;     // trace-free Codazzi equation
  Residual divergence;  // div hring = 1/2 dH
  Residual smoczyk;     // Kato-type equality relating |nabla hring|, |nabla |hring|| and dH
  Residual norm_split;  // |nabla h|^2 = |nabla hring|^2 + 1/2 |nabla H|^2
};

IdentityResiduals identity_residuals(const PointGeometry& pg);

struct BochnerResidual {
  Residual laplacian;  // Simons-type formula for the rough Laplacian of hring
  Residual bochner;    // the weighted Bochner formula for 1/2 Delta|hring|^2 |hring|^2
  double value() const;
  double normalized() const;
};

/// Needs fourth-order jets of the immersion at (u, v).
BochnerResidual bochner_residual(const ImmersionSpec& spec, double u, double v,
                                 NormalSide side = NormalSide::ChartInduced);

/// Scalar curvature from (g, dg, d2g) alone (Brioschi formula, R = 2K).
double intrinsic_scalar_curvature(const PointGeometry& pg);

}  // namespace umbilic
