#include "umbilic/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tensor2.hpp"

namespace umbilic {

namespace t2 = tensor2;
using JetVec = std::array<Jet2, 3>;
using JetMat = t2::M2<Jet2>;

Jet2 AmbientModel::conformal_factor(const JetVec& x) const {
  const Jet2 r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  return reciprocal(1.0 + (c / 4.0) * r2);
}

double AmbientModel::conformal_factor(const std::array<double, 3>& x) const {
  return 1.0 / (1.0 + (c / 4.0) * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
}

JetVec AmbientModel::log_factor_gradient(const JetVec& x, const Jet2& lambda) const {
  const Jet2 s = (-c / 2.0) * lambda;
  return {s * x[0], s * x[1], s * x[2]};
}

JetVec AmbientModel::connection(const JetVec& a, const JetVec& b, const JetVec& dlog) {
  const Jet2 a_dlog = a[0] * dlog[0] + a[1] * dlog[1] + a[2] * dlog[2];
  const Jet2 b_dlog = b[0] * dlog[0] + b[1] * dlog[1] + b[2] * dlog[2];
  const Jet2 ab = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  JetVec r;
  for (std::size_t k = 0; k < 3; ++k) r[k] = a[k] * b_dlog + b[k] * a_dlog - ab * dlog[k];
  return r;
}

namespace {

constexpr double kNormalFloor = 1e-300;

Jet2 dot(const JetVec& a, const JetVec& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

// First and second fundamental forms as jets. With immersion jets of order N,
// g carries order N - 1 and h order N - 2.
struct SurfaceJets {
  JetMat g;
  JetMat h;
};

SurfaceJets surface_jets(const ImmersionSpec& spec, double u, double v, int order, NormalSide side) {
  const JetVec f = spec.evaluate(u, v, order);
  std::array<JetVec, 2> df;
  for (std::size_t k = 0; k < 3; ++k) {
    df[0][k] = f[k].du();
    df[1][k] = f[k].dv();
  }
  std::array<std::array<JetVec, 2>, 2> ddf;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (std::size_t k = 0; k < 3; ++k) ddf[i][j][k] = df[i][k].partial(j);
    }
  }

  const AmbientModel ambient{spec.ambient_c()};
  const bool flat = ambient.c == 0.0;
  Jet2 lambda = Jet2::constant(1.0, order);
  JetVec dlog;
  if (!flat) {
    lambda = ambient.conformal_factor(f);
    dlog = ambient.log_factor_gradient(f, lambda);
  }
  const Jet2 lambda2 = lambda * lambda;

  const JetVec n{df[0][1] * df[1][2] - df[0][2] * df[1][1], df[0][2] * df[1][0] - df[0][0] * df[1][2],
                 df[0][0] * df[1][1] - df[0][1] * df[1][0]};
  const Jet2 nn = dot(n, n);
  if (!(nn.value() > kNormalFloor)) {
    throw SingularEvaluation("rank-deficient immersion (d_u f x d_v f = 0)", nn.value(), ChartPoint{u, v});
  }
  // Unit in the ambient metric: |nu|_ambient = lambda |nu|_euclid = 1.
  Jet2 scale = reciprocal(sqrt(nn) * lambda);
  if (side == NormalSide::Reversed) scale = -scale;
  JetVec nu;
  for (std::size_t k = 0; k < 3; ++k) nu[k] = n[k] * scale;

  SurfaceJets out;
  for (int i = 0; i < 2; ++i) {
    for (int j = i; j < 2; ++j) {
      out.g[i][j] = lambda2 * dot(df[i], df[j]);
      JetVec accel = ddf[i][j];
      if (!flat) {
        const JetVec conn = AmbientModel::connection(df[i], df[j], dlog);
        for (std::size_t k = 0; k < 3; ++k) accel[k] += conn[k];
      }
      out.h[i][j] = lambda2 * dot(accel, nu);
    }
  }
  out.g[1][0] = out.g[0][1];
  out.h[1][0] = out.h[0][1];
  return out;
}

template <class F>
auto annotate(double u, double v, F&& f) {
  try {
    return f();
  } catch (const SingularEvaluation& e) {
    if (e.point()) throw;
    throw e.at({u, v});
  }
}

}  // namespace

PointGeometry fundamental_forms(const ImmersionSpec& spec, double u, double v, int order, NormalSide side) {
  if (order < 3 || order > Jet2::kMaxOrder) {
    throw std::invalid_argument("fundamental_forms needs jet order 3 or 4");
  }
  const SurfaceJets sj = annotate(u, v, [&] { return surface_jets(spec, u, v, order, side); });
  PointGeometry pg;
  pg.at = {u, v};
  pg.c = spec.ambient_c();
  pg.order = order;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      pg.g[i][j] = sj.g[i][j].value();
      pg.h[i][j] = sj.h[i][j].value();
      for (int k = 0; k < 2; ++k) {
        const Jet2 dgk = sj.g[i][j].partial(k);
        pg.dg[k][i][j] = dgk.value();
        pg.dh[k][i][j] = sj.h[i][j].partial(k).value();
        for (int l = 0; l < 2; ++l) pg.d2g[l][k][i][j] = dgk.partial(l).value();
      }
    }
  }
  if (!(pg.det_g() > 0.0)) {
    throw SingularEvaluation("metric is not positive definite", pg.det_g(), ChartPoint{u, v});
  }
  pg.g_inv = t2::inverse(pg.g);
  return pg;
}

PointGeometry covariant_data(PointGeometry pg) {
  const Mat2& gi = pg.g_inv;
  pg.christoffel = t2::christoffel(gi, pg.dg);
  pg.H = t2::trace(gi, pg.h);

  // d_k H = d_k(g^ij) h_ij + g^ij d_k h_ij, with d_k g^ij = -g^ia d_k g_ab g^bj.
  for (int k = 0; k < 2; ++k) {
    const Mat2 dginv_raised = t2::raise(gi, pg.dg[k]);
    pg.gradH[k] = t2::trace(gi, pg.dh[k]) - t2::contract(pg.h, dginv_raised);
  }

  Tensor3 dhring;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      pg.hring[i][j] = pg.h[i][j] - 0.5 * pg.H * pg.g[i][j];
      for (int k = 0; k < 2; ++k) {
        dhring[k][i][j] = pg.dh[k][i][j] - 0.5 * pg.gradH[k] * pg.g[i][j] - 0.5 * pg.H * pg.dg[k][i][j];
      }
    }
  }
  pg.hring_norm2 = t2::norm2(gi, pg.hring);
  pg.gradH_norm2 = t2::norm2(gi, pg.gradH);
  pg.nabla_hring = t2::covariant_derivative(dhring, pg.christoffel, pg.hring);
  pg.nabla_hring_norm2 = t2::norm2(gi, pg.nabla_hring);
  pg.nabla_h = t2::covariant_derivative(pg.dh, pg.christoffel, pg.h);
  pg.nabla_h_norm2 = t2::norm2(gi, pg.nabla_h);
  pg.R = 0.5 * pg.H * pg.H - pg.hring_norm2 + 2.0 * pg.c;
  pg.covariant_complete = true;
  return pg;
}

PointGeometry point_geometry(const ImmersionSpec& spec, double u, double v, int order, NormalSide side) {
  return covariant_data(fundamental_forms(spec, u, v, order, side));
}

double hring_norm2_at(const ImmersionSpec& spec, double u, double v) {
  const SurfaceJets sj = annotate(u, v, [&] { return surface_jets(spec, u, v, 2, NormalSide::ChartInduced); });
  Mat2 g, h;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      g[i][j] = sj.g[i][j].value();
      h[i][j] = sj.h[i][j].value();
    }
  }
  const Mat2 gi = t2::inverse(g);
  const double H = t2::trace(gi, h);
  Mat2 hring;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) hring[i][j] = h[i][j] - 0.5 * H * g[i][j];
  }
  return t2::norm2(gi, hring);
}

IdentityResiduals identity_residuals(const PointGeometry& pg) {
  if (!pg.covariant_complete) throw std::logic_error("identity_residuals needs covariant_data first");
  const Mat2& g = pg.g;
  const Mat2& gi = pg.g_inv;
  const Tensor3& nh = pg.nabla_hring;
  const Vec2& dH = pg.gradH;
  const double abs_nh = std::sqrt(pg.nabla_hring_norm2);
  const double abs_dH = std::sqrt(pg.gradH_norm2);
  IdentityResiduals r;

  Tensor3 codazzi;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        codazzi[k][i][j] = nh[k][i][j] - nh[j][i][k] - 0.5 * (dH[j] * g[i][k] - dH[k] * g[i][j]);
      }
    }
  }
  r.codazzi = {std::sqrt(std::max(0.0, t2::norm2(gi, codazzi))), abs_nh + abs_dH};

  Vec2 div{};
  for (int i = 0; i < 2; ++i) {
    double s = 0.0;
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) s += gi[j][k] * nh[k][i][j];
    }
    div[i] = s - 0.5 * dH[i];
  }
  r.divergence = {std::sqrt(std::max(0.0, t2::norm2(gi, div))), abs_nh + abs_dH};

  // Everything in polynomial form: d_i |hring|^2 = 2 hring^kl nabla_i hring_kl,
  // and 4 |nabla |hring||^2 |hring|^2 = |nabla |hring|^2|^2.
  const Mat2 hring_up = t2::raise(gi, pg.hring);
  Vec2 ds{};
  for (int i = 0; i < 2; ++i) ds[i] = 2.0 * t2::contract(nh[i], hring_up);
  const double s = pg.hring_norm2;
  double cross = 0.0;  // hring^ij d_i|hring|^2 d_j H
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) cross += hring_up[i][j] * ds[i] * dH[j];
  }
  const double ds2 = t2::norm2(gi, ds);
  const double lhs = 2.0 * s * (pg.nabla_hring_norm2 - 0.5 * pg.gradH_norm2);
  const double rhs = ds2 - 2.0 * cross;
  r.smoczyk = {std::abs(lhs - rhs),
               2.0 * s * pg.nabla_hring_norm2 + s * pg.gradH_norm2 + ds2 + 2.0 * std::abs(cross)};

  r.norm_split = {std::abs(pg.nabla_h_norm2 - pg.nabla_hring_norm2 - 0.5 * pg.gradH_norm2),
                  pg.nabla_h_norm2 + pg.nabla_hring_norm2 + 0.5 * pg.gradH_norm2};
  return r;
}

double BochnerResidual::value() const { return std::max(laplacian.value, bochner.value); }
double BochnerResidual::normalized() const { return std::max(laplacian.normalized(), bochner.normalized()); }

BochnerResidual bochner_residual(const ImmersionSpec& spec, double u, double v, NormalSide side) {
  const SurfaceJets sj = annotate(u, v, [&] { return surface_jets(spec, u, v, 4, side); });
  const double c = spec.ambient_c();
  const JetMat& g = sj.g;  // order 3
  const JetMat& h = sj.h;  // order 2

  const JetMat gi = t2::inverse(g);
  t2::T3<Jet2> dg;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) dg[k][i][j] = g[i][j].partial(k);
    }
  }
  const t2::T3<Jet2> gamma = t2::christoffel(gi, dg);  // order 2
  const Jet2 H = t2::trace(gi, h);                       // order 2
  JetMat hring;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) hring[i][j] = h[i][j] - 0.5 * H * g[i][j];
  }
  t2::T3<Jet2> dhring;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) dhring[k][i][j] = hring[i][j].partial(k);
    }
  }
  const t2::T3<Jet2> nh = t2::covariant_derivative(dhring, gamma, hring);  // order 1
  const t2::V2<Jet2> dH{H.du(), H.dv()};                                   // order 1

  // Pointwise values from here on.
  Mat2 gv, giv, hringv;
  Tensor3 gammav;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      gv[i][j] = g[i][j].value();
      giv[i][j] = gi[i][j].value();
      hringv[i][j] = hring[i][j].value();
      for (int k = 0; k < 2; ++k) gammav[k][i][j] = gamma[k][i][j].value();
    }
  }
  const Vec2 dHv{dH[0].value(), dH[1].value()};
  const double Hv = H.value();

  // nabla_l nabla_k hring_ij, then the rough Laplacian g^lk nabla_l nabla_k hring_ij.
  Mat2 lap_hring{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int l = 0; l < 2; ++l) {
        for (int k = 0; k < 2; ++k) {
          double second = nh[k][i][j].partial(l).value();
          for (int m = 0; m < 2; ++m) {
            second -= gammav[m][l][k] * nh[m][i][j].value() + gammav[m][l][i] * nh[k][m][j].value() +
                      gammav[m][l][j] * nh[k][i][m].value();
          }
          s += giv[l][k] * second;
        }
      }
      lap_hring[i][j] = s;
    }
  }

  Mat2 ddH;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) ddH[i][j] = dH[j].partial(i).value();
  }
  const Mat2 hessH = t2::hessian(ddH, dHv, gammav);
  const double lapH = t2::trace(giv, hessH);

  const double hring_norm2 = t2::norm2(giv, hringv);
  const double R = 0.5 * Hv * Hv - hring_norm2 + 2.0 * c;

  BochnerResidual out;
  {
    Mat2 res;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        res[i][j] = lap_hring[i][j] - R * hringv[i][j] - hessH[i][j] + 0.5 * lapH * gv[i][j];
      }
    }
    const double scale = std::sqrt(t2::norm2(giv, lap_hring)) + std::abs(R) * std::sqrt(hring_norm2) +
                         std::sqrt(t2::norm2(giv, hessH)) + std::abs(lapH);
    out.laplacian = {std::sqrt(std::max(0.0, t2::norm2(giv, res))), scale};
  }
  {
    // Laplacian of |hring|^2 straight from its jet, independent of lap_hring.
    const Jet2 s = t2::norm2(gi, hring);  // order 2
    const Vec2 ds{s.du().value(), s.dv().value()};
    Mat2 dds;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) dds[i][j] = s.partial(i).partial(j).value();
    }
    const double lap_s = t2::trace(giv, t2::hessian(dds, ds, gammav));
    const Mat2 hring_up = t2::raise(giv, hringv);
    double cross = 0.0;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) cross += hring_up[i][j] * ds[i] * dHv[j];
    }
    const double sv = s.value();
    const double t1 = 0.5 * lap_s * sv;
    const double t2v = 0.5 * t2::norm2(giv, ds);  // 2 |nabla|hring||^2 |hring|^2
    const double t3 = cross;
    const double t4 = 0.5 * t2::norm2(giv, dHv) * sv;
    const double t5 = R * sv * sv;
    const double t6 = t2::contract(hessH, hring_up) * sv;
    out.bochner = {std::abs(t1 - t2v + t3 - t4 - t5 - t6),
                   std::abs(t1) + std::abs(t2v) + std::abs(t3) + std::abs(t4) + std::abs(t5) + std::abs(t6)};
  }
  return out;
}

double intrinsic_scalar_curvature(const PointGeometry& pg) {
  const double E = pg.g[0][0], F = pg.g[0][1], G = pg.g[1][1];
  const double Eu = pg.dg[0][0][0], Ev = pg.dg[1][0][0];
  const double Fu = pg.dg[0][0][1], Fv = pg.dg[1][0][1];
  const double Gu = pg.dg[0][1][1], Gv = pg.dg[1][1][1];
  const double Evv = pg.d2g[1][1][0][0];
  const double Fuv = pg.d2g[0][1][0][1];
  const double Guu = pg.d2g[0][0][1][1];

  auto det3 = [](const std::array<std::array<double, 3>, 3>& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double m1 = det3({{{-0.5 * Evv + Fuv - 0.5 * Guu, 0.5 * Eu, Fu - 0.5 * Ev},
                           {Fv - 0.5 * Gu, E, F},
                           {0.5 * Gv, F, G}}});
  const double m2 = det3({{{0.0, 0.5 * Ev, 0.5 * Gu}, {0.5 * Ev, E, F}, {0.5 * Gu, F, G}}});
  const double det = E * G - F * F;
  return 2.0 * (m1 - m2) / (det * det);
}

}  // namespace umbilic
