#pragma once

// Closed-form Jacobian of the rotating-frame field at the tetrahedral fixed
// point, Df = [[0, I], [A, B]], and a finite-difference oracle for it.

#include "cts/params.hpp"

#include <Eigen/Core>

#include <array>
#include <string>

namespace cts
{

template <class T>
struct Block2T
{
  std::array<T, 4> a{T(0), T(0), T(0), T(0)};

  Block2T() = default;
  Block2T(const T &a11, const T &a12, const T &a21, const T &a22) : a{a11, a12, a21, a22} {}

  T &operator()(int i, int j) { return a[2 * i + j]; }
  const T &operator()(int i, int j) const { return a[2 * i + j]; }

  Block2T scaled(const T &k) const { return {k * a[0], k * a[1], k * a[2], k * a[3]}; }
  bool operator==(const Block2T &o) const { return a == o.a; }
};

using Block2 = Block2T<double>;

template <class T>
Block2T<T> s_d(const Block2T<T> &b)
{
  return {-b.a[0], b.a[1], b.a[2], -b.a[3]};
}

template <class T>
Block2T<T> s_o(const Block2T<T> &b)
{
  return {b.a[0], -b.a[1], -b.a[2], b.a[3]};
}

template <class T>
using Mat8 = std::array<T, 64>;

template <class T>
struct JacobianBlocksT
{
  std::array<Block2T<T>, 4> B; ///< before the factor Omega
  std::array<Block2T<T>, 4> F; ///< before the factor Omega^2
  std::array<std::array<Block2T<T>, 4>, 4> C; ///< before the mass prefactors
  T z, m, m1, X, Omega, omega_sq;

  /// Mass prefactor of block C_ij: m on the polar row, m1 on the polar
  /// column below it, X elsewhere.
  T prefactor(int i, int j) const
  {
    if (i == 0)
      return m;
    if (j == 0)
      return m1;
    return X;
  }

  /// A = Omega^2 diag(F_k) + C, row-major 8 x 8.
  Mat8<T> A() const
  {
    Mat8<T> out;
    out.fill(T(0));
    for (int bi = 0; bi < 4; ++bi)
      for (int bj = 0; bj < 4; ++bj)
      {
        const T k = prefactor(bi, bj);
        for (int r = 0; r < 2; ++r)
          for (int c = 0; c < 2; ++c)
          {
            T v = k * C[bi][bj](r, c);
            if (bi == bj)
              v += omega_sq * F[bi](r, c);
            out[(2 * bi + r) * 8 + 2 * bj + c] = v;
          }
      }
    return out;
  }

  /// B = Omega diag(B_k), row-major 8 x 8.
  Mat8<T> Bmat() const
  {
    Mat8<T> out;
    out.fill(T(0));
    for (int b = 0; b < 4; ++b)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          out[(2 * b + r) * 8 + 2 * b + c] = Omega * B[b](r, c);
    return out;
  }
};

using JacobianBlocks = JacobianBlocksT<double>;

/// Block formulas without the admissibility check; Omega is left at zero when
/// Omega^2 <= 0 so that only Omega^2-dependent quantities remain meaningful.
template <class T>
JacobianBlocksT<T> assemble_blocks_raw(const MassConfigT<T> &cfg, const T &z)
{
  using std::sqrt;
  const auto ds = derived_scalars_unchecked(cfg, z);
  const T s3 = constants<T>::sqrt3();
  const T z2 = z * z;
  const T z4 = z2 * z2;
  const T q = T(1) / 4;
  const T e = T(3) / 8;

  JacobianBlocksT<T> jb;
  jb.z = z;
  jb.m = cfg.m;
  jb.m1 = cfg.m1;
  jb.X = cfg.m * ds.D;
  jb.omega_sq = ds.omega_sq;
  jb.Omega = ds.omega_sq > 0 ? sqrt(ds.omega_sq) : T(0);

  jb.B[0] = {T(0), T(2), T(-2), T(0)};
  jb.B[1] = {T(0), 2 * z2, T(-2), T(0)};
  jb.B[2] = {s3 * (z2 - 1) / 2, (3 + z2) / 2, -(1 + 3 * z2) / 2, s3 * (1 - z2) / 2};
  jb.B[3] = s_d(jb.B[2]);

  jb.F[0] = {T(1), T(0), T(0), T(1)};
  jb.F[1] = {-1 + 4 * z2, T(0), T(0), T(0)};
  jb.F[2] = {q * (-1 + 4 * z2), q * s3 * (1 - 4 * z2), q * s3 * (1 - 4 * z2), q * (-3 + 12 * z2)};
  jb.F[3] = s_o(jb.F[2]);

  auto &C = jb.C;
  C[0][0] = {3 * z / 2, T(0), T(0), 3 * z / 2};
  C[0][1] = {T(-2), T(0), T(0), T(1)};
  C[0][2] = {q, q * 3 * s3, q * 3 * s3, -5 * q};
  C[0][3] = s_o(C[0][2]);

  C[1][0] = {-2 * z2, T(0), T(0), T(1)};
  C[2][0] = {q * (3 - 2 * z2), q * s3 * (1 + 2 * z2), q * s3 * (1 + 2 * z2), q * (1 - 6 * z2)};
  C[3][0] = s_o(C[2][0]);

  C[1][2] = {e * (-1 + 9 * z2 - 18 * z4), e * s3 * (1 - z2 + 6 * z4), e * 3 * s3 * (-1 + 3 * z2),
             e * (5 - 3 * z2)};
  C[1][3] = s_o(C[1][2]);

  C[2][1] = {e * (-9 * z4 - 6 * z2 + 5), e * s3 * (3 * z4 + 4 * z2 - 1),
             e * 3 * s3 * (3 * z4 - 2 * z2 + 1), e * (-9 * z4 + 12 * z2 - 1)};
  C[3][1] = s_o(C[2][1]);

  C[2][3] = {q * (3 + 9 * z2), q * 3 * s3 * (3 * z4 - 5 * z2 + 2), T(0), q * (3 - 27 * z4)};
  C[3][2] = s_o(C[2][3]);

  C[1][1] = {T(3) / 4 * (1 - 15 * z2), T(0), T(0), T(3) / 4 * (-2 + 12 * z2)};
  const T t = T(3) / 16;
  C[2][2] = {t * (-5 + 21 * z2), t * 3 * s3 * (9 * z2 - 1), t * 3 * s3 * (9 * z2 - 1), t * (1 - 33 * z2)};
  C[3][3] = s_o(C[2][2]);
  return jb;
}

/// Analytic blocks at an admissible point.
template <class T>
JacobianBlocksT<T> assemble_blocks(const MassConfigT<T> &cfg, const T &z)
{
  auto jb = assemble_blocks_raw(cfg, z);
  if (!(jb.omega_sq > 0))
    throw AdmissibilityError("Jacobian requires Omega^2 > 0");
  return jb;
}

using Mat16 = Eigen::Matrix<double, 16, 16>;

Mat16 full_jacobian(const JacobianBlocks &blocks);

/// Central differences of the rotating-frame field at the fixed point, with
/// one Richardson halving.
Mat16 fd_jacobian(const MassConfig &masses, double z, double step);

/// Block names "B1".."B4", "F1".."F4", "C11".."C44" in a fixed order with the
/// unscaled 2 x 2 entries.
std::string blocks_json(const JacobianBlocks &blocks);

/// Max entrywise relative error between two Jacobians; entries are compared
/// against max(|a_ij|, floor * max|a|).
double jacobian_relative_error(const Mat16 &analytic, const Mat16 &other, double floor = 1e-3);

} // namespace cts
