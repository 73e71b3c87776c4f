#pragma once

// Index gymnastics on a 2-dimensional chart, generic over the scalar type
// (double for pointwise data, Jet2 when further derivatives are needed).
// Conventions: m[i][j] for 2-tensors, t[k][i][j] for 3-tensors where k is
// the derivative index; Christoffel symbols gamma[k][i][j] = Gamma^k_ij.

#include <array>

namespace umbilic::tensor2 {

template <class T>
using M2 = std::array<std::array<T, 2>, 2>;
template <class T>
using T3 = std::array<M2<T>, 2>;
template <class T>
using V2 = std::array<T, 2>;

inline double zero_like(double) { return 0.0; }
template <class T>
T zero_like(const T& x) {
  return x * 0.0;
}

template <class T>
M2<T> inverse(const M2<T>& g) {
  const T det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
  const T inv = 1.0 / det;
  return {{{g[1][1] * inv, -(g[0][1] * inv)}, {-(g[1][0] * inv), g[0][0] * inv}}};
}

/// Gamma^k_ij = 1/2 g^kl (d_i g_jl + d_j g_il - d_l g_ij), with dg[a][b][c] = d_a g_bc.
template <class T>
T3<T> christoffel(const M2<T>& ginv, const T3<T>& dg) {
  T3<T> gamma;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        T s = zero_like(ginv[0][0]);
        for (int l = 0; l < 2; ++l) s += ginv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
        gamma[k][i][j] = 0.5 * s;
      }
    }
  }
  return gamma;
}

/// g^ij a_ij
template <class T>
T trace(const M2<T>& ginv, const M2<T>& a) {
  return ginv[0][0] * a[0][0] + ginv[0][1] * a[0][1] + ginv[1][0] * a[1][0] + ginv[1][1] * a[1][1];
}

/// a^ij = g^ia g^jb a_ab
template <class T>
M2<T> raise(const M2<T>& ginv, const M2<T>& a) {
  M2<T> r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      T s = zero_like(ginv[0][0]);
      for (int p = 0; p < 2; ++p) {
        for (int q = 0; q < 2; ++q) s += ginv[i][p] * ginv[j][q] * a[p][q];
      }
      r[i][j] = s;
    }
  }
  return r;
}

/// Full contraction a_ij b^ij.
template <class T>
T contract(const M2<T>& a, const M2<T>& b_upper) {
  return a[0][0] * b_upper[0][0] + a[0][1] * b_upper[0][1] + a[1][0] * b_upper[1][0] + a[1][1] * b_upper[1][1];
}

template <class T>
T norm2(const M2<T>& ginv, const M2<T>& a) {
  return contract(a, raise(ginv, a));
}

template <class T>
T norm2(const M2<T>& ginv, const V2<T>& w) {
  return ginv[0][0] * w[0] * w[0] + ginv[0][1] * w[0] * w[1] + ginv[1][0] * w[1] * w[0] + ginv[1][1] * w[1] * w[1];
}

template <class T>
T norm2(const M2<T>& ginv, const T3<T>& t) {
  T s = zero_like(ginv[0][0]);
  for (int k = 0; k < 2; ++k) {
    for (int l = 0; l < 2; ++l) s += ginv[k][l] * contract(t[k], raise(ginv, t[l]));
  }
  return s;
}

/// nabla_k a_ij = d_k a_ij - Gamma^l_ki a_lj - Gamma^l_kj a_il, given da[k][i][j] = d_k a_ij.
template <class T>
T3<T> covariant_derivative(const T3<T>& da, const T3<T>& gamma, const M2<T>& a) {
  T3<T> r;
  for (int k = 0; k < 2; ++k) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        T s = da[k][i][j];
        for (int l = 0; l < 2; ++l) s -= gamma[l][k][i] * a[l][j] + gamma[l][k][j] * a[i][l];
        r[k][i][j] = s;
      }
    }
  }
  return r;
}

/// Covariant Hessian of a scalar: d_i d_j f - Gamma^m_ij d_m f.
template <class T>
M2<T> hessian(const M2<T>& second, const V2<T>& first, const T3<T>& gamma) {
  M2<T> r;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) r[i][j] = second[i][j] - gamma[0][i][j] * first[0] - gamma[1][i][j] * first[1];
  }
  return r;
}

}  // namespace umbilic::tensor2
