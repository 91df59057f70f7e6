#pragma once

// Characteristic pencil det(-Omega^2 mu^2 I + mu Omega B + A), its reduction
// to the degree-6 polynomial in M = mu^2, roots and E/H/CS classification.

#include "cts/linearization.hpp"
#include "cts/polynomial.hpp"

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace cts
{

/// Coefficients of p(mu) divided by Omega^16, so the leading term is mu^16.
template <class T>
struct PencilPolynomialT
{
  Poly<T> mu;          ///< degree 16 in mu
  Poly<T> M;           ///< even part as a polynomial of degree 8 in M
  T omega_sq;          ///< p(mu) = Omega^16 * (this)
  T odd_residual;      ///< max |odd coefficient| / max |coefficient|
  T check_residual;    ///< relative interpolation error at an extra node
};

using PencilPolynomial = PencilPolynomialT<double>;

template <class T>
struct DeflatedPolynomialT
{
  Poly<T> monic;       ///< degree 6, leading coefficient 1
  Poly<T> coeffs;      ///< monic * Omega^16 / (4 z Omega^2)^3
  T remainder_M;       ///< relative remainder of the division by M
  T remainder_M1;      ///< relative remainder of the division by M + 1
  T factor;            ///< 4 z Omega^2
};

using DeflatedPolynomial = DeflatedPolynomialT<double>;

namespace detail
{

/// det of the Omega^2-normalised pencil at mu, restricted to the bodies
/// first..3 (first = 1 drops the polar body).
template <class T, class S>
S normalised_det(const JacobianBlocksT<T> &jb, const S &mu, int first = 0)
{
  const int n = 2 * (4 - first);
  std::vector<S> a(n * n, S(0));
  for (int bi = first; bi < 4; ++bi)
    for (int bj = first; bj < 4; ++bj)
    {
      const T k = jb.prefactor(bi, bj) / jb.omega_sq;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
        {
          S v = S(k * jb.C[bi][bj](r, c));
          if (bi == bj)
          {
            v += S(jb.F[bi](r, c)) + mu * S(jb.B[bi](r, c));
            if (r == c)
              v -= mu * mu;
          }
          a[(2 * (bi - first) + r) * n + 2 * (bj - first) + c] = v;
        }
    }
  return determinant(std::move(a), n);
}

} // namespace detail

/// Evaluation-interpolation of the pencil determinant on 32 roots of unity
/// in mu (a discrete Fourier transform), checked at one extra real node.
/// Works for any sign of Omega^2 != 0.
template <class T>
PencilPolynomialT<T> pencil_poly(const JacobianBlocksT<T> &jb)
{
  using std::abs;
  using C = Complex<T>;
  if (jb.omega_sq == T(0))
    throw NumericalError("pencil undefined at Omega^2 = 0");
  constexpr int n = 32;
  const Poly<T> all = circle_interpolate<T>([&](const C &mu) { return detail::normalised_det(jb, mu); }, n);

  PencilPolynomialT<T> out;
  out.omega_sq = jb.omega_sq;
  out.mu.assign(all.begin(), all.begin() + 17);
  const T scale = max_abs(out.mu);
  T odd = T(0);
  for (int k = 1; k < 17; k += 2)
    odd = std::max(odd, T(abs(out.mu[k])));
  // Aliased terms above degree 16 must vanish as well.
  for (int k = 17; k < n; ++k)
    odd = std::max(odd, T(abs(all[k])));
  out.odd_residual = odd / scale;

  const T xc = T(0.7310469);
  const T direct = detail::normalised_det(jb, xc);
  const T interp = horner(out.mu, xc);
  T mag = T(0);
  {
    T xp = T(1);
    for (const auto &c : out.mu)
    {
      mag += abs(c) * xp;
      xp *= abs(xc);
    }
  }
  out.check_residual = abs(direct - interp) / mag;
  if (out.check_residual > T(1e-8))
    throw NumericalError("pencil interpolation residual too large");

  out.M.resize(9);
  for (int k = 0; k <= 8; ++k)
    out.M[k] = out.mu[2 * k];
  return out;
}

/// Divide by M, then by M + 1, then by the scalar (4 z Omega^2)^3.
template <class T>
DeflatedPolynomialT<T> deflate(const PencilPolynomialT<T> &p, const T &z, T tol = T(1e-8))
{
  using std::abs;
  DeflatedPolynomialT<T> out;
  const T scale = max_abs(p.M);
  T r0, r1;
  Poly<T> q = divide_linear(p.M, T(0), &r0);
  q = divide_linear(q, T(-1), &r1);
  out.remainder_M = abs(r0) / scale;
  out.remainder_M1 = abs(r1) / scale;
  if (out.remainder_M > tol || out.remainder_M1 > tol)
    throw DeflationError("first-integral factors did not divide the pencil");
  const T lead = q.back();
  out.monic = q;
  for (auto &c : out.monic)
    c /= lead;
  out.factor = 4 * z * p.omega_sq;
  const T w = p.omega_sq * p.omega_sq * p.omega_sq * p.omega_sq;
  const T k = (w * w) / (out.factor * out.factor * out.factor);
  out.coeffs = q;
  for (auto &c : out.coeffs)
    c *= k;
  return out;
}

/// Monic degree-6 polynomial at (cfg, z); no admissibility requirement.
template <class T>
Poly<T> reduced_poly(const MassConfigT<T> &cfg, const T &z, T tol = T(1e-8))
{
  const auto jb = assemble_blocks_raw(cfg, z);
  return deflate(pencil_poly(jb), z, tol).monic;
}

// ---------------------------------------------------------------------------
// Classification

struct SpectralClass
{
  int e = 0; ///< real negative roots
  int h = 0; ///< real positive roots
  int cs = 0; ///< non-real conjugate pairs

  std::string code() const;
  bool operator==(const SpectralClass &o) const { return e == o.e && h == o.h && cs == o.cs; }
  bool operator!=(const SpectralClass &o) const { return !(*this == o); }
};

enum class ClassCode
{
  E6,
  E4CS1,
  E2CS2,
  E5H1,
  E3H1CS1,
  Other,
};

std::string to_string(ClassCode c);
ClassCode class_code(const SpectralClass &c);

struct SpectrumReport
{
  double gamma = 0.0;
  double z = 0.0;
  double omega_sq = 0.0;
  std::array<std::complex<double>, 6> roots{};
  SpectralClass cls;
  ClassCode code = ClassCode::Other;
  bool degenerate = false;
  double residual = 0.0; ///< max |p(M_i)| / sum |c_k| |M_i|^k
  std::array<double, 6> residuals{};
  double remainder_M = 0.0;
  double remainder_M1 = 0.0;
  double verify_error = -1.0; ///< negative when not verified

  std::string to_json() const;
};

struct ClassifyOptions
{
  double tau_zero = 1e-9;
  double tau_cluster = 1e-7;
};

/// Classify the roots of a monic degree-6 polynomial. Roots come from the
/// companion matrix and are polished by one Newton step in extended precision.
SpectrumReport classify(const Poly<double> &monic, const ClassifyOptions &opt = {});

/// Classification of roots already computed in some precision.
SpectrumReport classify_roots(const Poly<double> &monic, std::array<std::complex<double>, 6> roots,
                              const ClassifyOptions &opt = {});

/// Roots and class of a monic degree-6 polynomial held in some precision;
/// multiprecision input is solved by Aberth iteration in that precision.
SpectrumReport classify_monic(const Poly<double> &monic, const ClassifyOptions &opt = {});
SpectrumReport classify_monic(const Poly<Extended> &monic, const ClassifyOptions &opt = {});
SpectrumReport classify_monic(const Poly<Wide> &monic, const ClassifyOptions &opt = {});

enum class Precision
{
  Double,
  Extended, ///< 50 digits
  Wide,     ///< 100 digits
};

struct SpectrumOptions
{
  Precision precision = Precision::Double;
  bool verify = false;
  ClassifyOptions classify;
};

/// assemble -> pencil -> deflate -> classify. Throws AdmissibilityError.
SpectrumReport spectrum_at(const MassConfig &masses, double z, const SpectrumOptions &opt = {});

/// Max distance between the 16 eigenvalues of Df and the set
/// {0, 0, i Omega, -i Omega} U {+-Omega sqrt(M_i)}, matched greedily.
double pencil_eigen_mismatch(const JacobianBlocks &jb, const std::array<std::complex<double>, 6> &roots);

} // namespace cts
