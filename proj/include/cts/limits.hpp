#pragma once

// Limit problems and leading-order branch formulas: the restricted problem
// (m1 = 0), the large-ratio limit m/m1 -> 0, small latitudes and the
// neighbourhood of the existence boundary.

#include "cts/spectrum.hpp"

#include <complex>
#include <string>
#include <vector>

namespace cts
{

// ---------------------------------------------------------------------------
// Scalar functions of the latitude

template <class T>
T D_of(const T &z)
{
  using std::sqrt;
  const T w = 1 + 3 * z * z;
  return constants<T>::alpha() / (w * w * sqrt(w));
}

template <class T>
T h_fn(const T &z, const T &D)
{
  return (3 - 18 * z * z) * D + 2 * z;
}

template <class T>
T k_fn(const T &z, const T &D)
{
  return D * (9 * z * z * z - 6 * z) - 1;
}

template <class T>
T g_fn(const T &z, const T &D)
{
  const T k = k_fn(z, D);
  return h_fn(z, D) * k * k;
}

/// Exact root of the three-body factor at m1 = 0.
template <class T>
T exact_solution_M0(const T &z)
{
  const T z2 = z * z;
  return -2 * z2 * (5 - 3 * z2) / (1 + 3 * z2);
}

/// T(M) = M^2 (M+1)^4, the common limit for m/m1 -> 0 and for z -> 0.
template <class T>
T limit_T(const T &M)
{
  const T a = M + 1;
  return M * M * a * a * a * a;
}

template <class T>
Poly<T> limit_T_poly()
{
  return {T(0), T(0), T(1), T(4), T(6), T(4), T(1)};
}

// ---------------------------------------------------------------------------
// Restricted problem

/// c = z G^{3/2} - 2.
template <class T>
T restricted_c(const T &z)
{
  using std::sqrt;
  const T G = T(3) * (1 + 3 * z * z) / 4;
  return z * G * sqrt(G) - 2;
}

/// M^2 - c M + (c/2 + 2)^2: the polar-row factor of the m1 = 0 pencil.
template <class T>
Poly<T> restricted_pair_poly(const T &z)
{
  const T c = restricted_c(z);
  const T q = c / 2 + 2;
  return {q * q, -c, T(1)};
}

/// Monic degree-6 polynomial in M of the three-body block (bodies 2..4) of
/// the m1 = 0 pencil. Even in z.
template <class T>
Poly<T> three_body_poly(const T &z)
{
  using std::abs;
  using C = Complex<T>;
  const auto jb = assemble_blocks_raw(MassConfigT<T>{T(1), T(0)}, z);
  constexpr int n = 16;
  const Poly<T> mu = circle_interpolate<T>([&](const C &x) { return detail::normalised_det(jb, x, 1); }, n);
  const T scale = max_abs(mu);
  T stray = T(0);
  for (int k = 1; k < n; k += 2)
    stray = std::max(stray, T(abs(mu[k])));
  for (int k = 13; k < n; k += 2)
    stray = std::max(stray, T(abs(mu[k])));
  if (stray > T(1e-10) * scale)
    throw NumericalError("three-body block is not an even polynomial of degree 12");
  Poly<T> M(7);
  for (int k = 0; k <= 6; ++k)
    M[k] = mu[2 * k] / mu[12];
  return M;
}

/// The cubic Q(M) left after removing M, M+1 and M - M0 from the
/// three-body block. Throws DeflationError on a nonzero remainder.
template <class T>
Poly<T> q_cubic(const T &z, T tol = T(1e-10))
{
  using std::abs;
  const Poly<T> p = three_body_poly(z);
  const T scale = max_abs(p);
  T r0, r1, r2;
  Poly<T> q = divide_linear(p, T(0), &r0);
  q = divide_linear(q, T(-1), &r1);
  q = divide_linear(q, exact_solution_M0(z), &r2);
  const T worst = std::max({T(abs(r0)), T(abs(r1)), T(abs(r2))}) / scale;
  if (worst > tol)
    throw DeflationError("three-body factor does not contain M, M+1 and M - M0");
  return q;
}

/// S(M) = (M^2 + 2M + z^2 G^3/4 + 1)^2 - z^2 G^3 (M-1)^2 with Z = z^2.
template <class T>
Poly<T> s_quartic(const T &Z)
{
  const T G = T(3) * (1 + 3 * Z) / 4;
  const T w = Z * G * G * G;
  const Poly<T> a = {w / 4 + 1, T(2), T(1)};
  const Poly<T> b = {T(-1), T(1)};
  Poly<T> s = multiply(a, a);
  const Poly<T> b2 = multiply(b, b);
  for (std::size_t k = 0; k < b2.size(); ++k)
    s[k] -= w * b2[k];
  return s;
}

template <class T>
struct RestrictedSpectrumT
{
  T z;
  T c;
  std::array<Complex<T>, 2> m_pair;
  T M0;
  Poly<T> Q;                          ///< monic cubic
  std::vector<Complex<T>> q_roots;    ///< roots of Q
  std::vector<Complex<T>> three_body; ///< 0, -1, M0 and the roots of Q
};

using RestrictedSpectrum = RestrictedSpectrumT<double>;

/// Roots of the m1 = 0 problem. The mass m only scales time and drops out.
template <class T>
RestrictedSpectrumT<T> restricted_spectrum(const T &z, const T &m = T(1))
{
  using std::abs;
  using std::sqrt;
  if (z == 0 || !(abs(z) < 1))
    throw DomainError("restricted_spectrum: z must lie in (-1,0) U (0,1)");
  if (!(m > 0))
    throw DomainError("restricted_spectrum: mass must be positive");
  RestrictedSpectrumT<T> out;
  out.z = z;
  out.c = restricted_c(z);
  const T disc = -8 * (out.c + 2);
  const Complex<T> root = disc >= 0 ? Complex<T>(sqrt(disc), T(0)) : Complex<T>(T(0), sqrt(-disc));
  out.m_pair = {(Complex<T>(out.c) - root) / T(2), (Complex<T>(out.c) + root) / T(2)};
  out.M0 = exact_solution_M0(z);
  out.Q = q_cubic(z);
  out.q_roots = poly_roots(out.Q);
  out.three_body = {Complex<T>(0), Complex<T>(-1), Complex<T>(out.M0)};
  for (const auto &r : out.q_roots)
    out.three_body.push_back(r);
  return out;
}

template <class T>
struct QSValue
{
  T Q;
  T S;
};

/// Q and S at (Z, M); Q uses the latitude z = -sqrt(Z) (Q is even in z).
template <class T>
QSValue<T> q_and_s(const T &Z, const T &M)
{
  using std::sqrt;
  if (!(Z > 0) || !(Z < 1))
    throw DomainError("q_and_s: Z must lie in (0, 1)");
  return {horner(q_cubic(-sqrt(Z)), M), horner(s_quartic(Z), M)};
}

/// Sylvester resultant of Q(., Z) and S(., Z) in M.
template <class T>
T qs_resultant(const T &Z)
{
  using std::sqrt;
  return resultant(q_cubic(-sqrt(Z)), s_quartic(Z));
}

/// Discriminant of Q at latitude z.
template <class T>
T q_discriminant(const T &z)
{
  return discriminant(q_cubic(z));
}

// ---------------------------------------------------------------------------
// Large-ratio limit m = eps, m1 = 1

/// Unnormalised reduced polynomial at (m, m1) = (eps, 1); a polynomial in eps.
template <class T>
Poly<T> eps_poly(const T &eps, const T &z)
{
  using std::sqrt;
  const auto jb = assemble_blocks_raw(MassConfigT<T>{eps, T(1)}, z);
  return deflate(pencil_poly(jb), z, T(sqrt(std::numeric_limits<T>::epsilon()))).coeffs;
}

/// Quartic in N whose roots are the limits (M + 1)/eps of the four roots
/// near -1 as eps -> 0. Obtained by interpolating eps_poly in eps and
/// collecting the eps^4 term of eps_poly(-1 + eps N).
template <class T>
Poly<T> limit_quartic(const T &z, T *vanishing = nullptr)
{
  using std::abs;
  constexpr int nodes = 12;
  std::vector<T> x(nodes);
  std::vector<Poly<T>> vals(nodes);
  for (int i = 0; i < nodes; ++i)
  {
    x[i] = T(i + 1) / T(8 * nodes);
    vals[i] = taylor_shift(eps_poly(x[i], z), T(-1));
  }
  // b[j][l]: eps^l coefficient of the j-th Taylor coefficient about M = -1.
  std::vector<Poly<T>> b(7);
  for (int j = 0; j <= 6; ++j)
  {
    std::vector<T> y(nodes);
    for (int i = 0; i < nodes; ++i)
      y[i] = vals[i][j];
    b[j] = interpolate_monomial(x, y);
  }
  T scale = T(0);
  for (const auto &bj : b)
    scale = std::max(scale, max_abs(bj));
  T lower = T(0);
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j <= k; ++j)
      lower = std::max(lower, T(abs(b[j][k - j])));
  if (vanishing)
    *vanishing = lower / scale;
  Poly<T> q(5);
  for (int j = 0; j <= 4; ++j)
    q[j] = b[j][4 - j];
  return q;
}

// ---------------------------------------------------------------------------
// Leading-order branches

template <class T>
struct BranchValue
{
  std::string name;
  Complex<T> value;
  T order; ///< power of the small parameter at which the expansion stops
};

/// Branches at small eps = m/m1 for z in (0, 1): the pair leaving M = 0 and
/// four roots -1 + eps N_i with the small-z forms of N_i.
template <class T>
std::vector<BranchValue<T>> eps_branches(const T &z, const T &eps)
{
  using std::sqrt;
  if (!(z > 0) || !(z < 1))
    throw DomainError("eps_branches: z must lie in (0, 1)");
  if (!(eps > 0) || eps > T(0.01))
    throw DomainError("eps_branches: eps must lie in (0, 0.01]");
  const T D = D_of(z);
  const T a = constants<T>::alpha();
  const T z2 = z * z, z3 = z2 * z, z5 = z3 * z2;
  const T m0 = T(3) * eps / 4 * z * (4 * z2 - 1) * h_fn(z, D);
  const T rad = 27 * z5 * (T(1) / 4 - z2) * g_fn(z, D);
  const Complex<T> sq = rad >= 0 ? Complex<T>(sqrt(rad), T(0)) : Complex<T>(T(0), sqrt(-rad));
  const Complex<T> split = sq * eps * sqrt(eps);
  using C = Complex<T>;
  return {
      {"M0_eps", C(m0), T(1)},
      {"Meps_plus", C(m0) + split, T(3) / 2},
      {"Meps_minus", C(m0) - split, T(3) / 2},
      {"N1_eps", C(-1 + eps * 9 * z * a / 4), T(1)},
      {"N2_eps", C(-1 + eps * 6 * z2), T(1)},
      {"N3_eps", C(-1 - eps * 36 * z3 * a), T(1)},
      {"N4_eps", C(-1 + eps * 81 * z3 * a / 4), T(1)},
  };
}

/// Roots at fixed Gamma and small z > 0, with eps = 1/Gamma.
template <class T>
std::vector<BranchValue<T>> smallz_branches(const T &gamma, const T &z)
{
  using std::sqrt;
  if (!(gamma > 0))
    throw DomainError("smallz_branches: gamma must be positive");
  if (!(z > 0) || z > T(0.05))
    throw DomainError("smallz_branches: z must lie in (0, 0.05]");
  const T eps = 1 / gamma;
  const T a = constants<T>::alpha();
  const T z2 = z * z, z3 = z2 * z;
  const T base = -9 * a * eps * z / 4 + (81 * a * a * eps * eps - 24 * eps) * z2 / 16;
  const T split = 9 * sqrt(a * eps * eps * eps) * z2 * sqrt(z) / 2;
  using C = Complex<T>;
  return {
      {"M12_smallz_plus", C(base + split), T(5) / 2},
      {"M12_smallz_minus", C(base - split), T(5) / 2},
      {"N1_smallz", C(-1 + 9 * a * eps * z / 4), T(1)},
      {"N2_smallz", C(-1 + 6 * eps * z2), T(2)},
      {"N3_smallz", C(-1 + 256 * eps * z3 / (3 * a)), T(3)},
      {"N4_smallz", C(-1 - 4096 * eps * z3 / (27 * a)), T(3)},
  };
}

template <class T>
struct Near00Curves
{
  T z_eh;     ///< elliptic-hyperbolic curve, z < 0
  T z_hh_pos; ///< double-root curve for z > 0
  T z_hh_neg; ///< double-root curve along the existence boundary, z < 0
};

/// Gamma on the elliptic-hyperbolic curve, -45 alpha z^3 / 2 = -80 z^3 / sqrt3.
template <class T>
T near00_gamma_eh(const T &z)
{
  return -45 * constants<T>::alpha() * z * z * z / 2;
}

/// Gamma on the boundary double-root curve, -9 z D/4 - 243 z^2 D^2 / 8.
template <class T>
T near00_gamma_hh_neg(const T &z)
{
  const T D = D_of(z);
  return -9 * z * D / 4 - 243 * z * z * D * D / 8;
}

/// The three curves through the origin, solved for z at a given small Gamma.
template <class T>
Near00Curves<T> near00_curves(const T &gamma)
{
  using std::cbrt;
  using std::pow;
  using std::sqrt;
  if (!(gamma > 0) || gamma > T(0.05))
    throw DomainError("near00_curves: gamma must lie in (0, 0.05]");
  const T a = constants<T>::alpha();
  Near00Curves<T> out;
  out.z_eh = -cbrt(2 * gamma / (45 * a));
  out.z_hh_pos = cbrt(gamma * gamma) / (4 * pow(T(3), T(1) / 6));
  // Small root of 243 a^2 z^2 / 8 + 9 a z / 4 + gamma = 0, rationalised.
  const T qa = 243 * a * a / 8, qb = 9 * a / 4;
  const T disc = qb * qb - 4 * qa * gamma;
  if (disc < 0)
    throw DomainError("near00_curves: gamma outside the range of the boundary curve");
  out.z_hh_neg = -2 * gamma / (qb + sqrt(disc));
  return out;
}

/// Leading-order roots for small z < 0 at gamma_gap = Gamma*(z) - Gamma -> 0+:
/// two roots near (-8/sqrt3)|z|/gap, one near (8/sqrt3)|z|/gap, one near -1,
/// and a complex pair -1 + (27/2) z^4/gap +- i sqrt54 sqrt(z^4/gap).
template <class T>
std::vector<BranchValue<T>> boundary_asymptotics(const T &z, const T &gap)
{
  using std::abs;
  using std::sqrt;
  if (!(z < 0) || z <= T(-0.05))
    throw DomainError("boundary_asymptotics: z must lie in (-0.05, 0)");
  if (!(gap > 0) || !(gap < gamma_star(z)))
    throw DomainError("boundary_asymptotics: gap must lie in (0, Gamma*(z))");
  const T s3 = constants<T>::sqrt3();
  const T az = abs(z);
  const T z4 = z * z * z * z;
  using C = Complex<T>;
  const C chi1(-8 / s3 * az / gap);
  const C chi3(8 / s3 * az / gap);
  const C pair(T(27) / 2 * z4 / gap - 1, sqrt(T(54)) * sqrt(z4 / gap));
  return {
      {"chi1_a", chi1, T(0)},
      {"chi1_b", chi1, T(0)},
      {"chi3", chi3, T(0)},
      {"chi4", C(-1), T(0)},
      {"chi56_plus", pair, T(0)},
      {"chi56_minus", std::conj(pair), T(0)},
  };
}

} // namespace cts
