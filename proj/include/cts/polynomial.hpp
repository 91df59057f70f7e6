#pragma once

// Dense polynomial helpers in a generic scalar type. Coefficients are stored
// in ascending order: p[k] multiplies x^k.

#include "cts/types.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <vector>

namespace cts
{

template <class T>
using Poly = std::vector<T>;

template <class T>
using Complex = std::complex<T>;

template <class T, class X>
X horner(const Poly<T> &p, const X &x)
{
  X acc = X(0);
  for (auto it = p.rbegin(); it != p.rend(); ++it)
    acc = acc * x + X(*it);
  return acc;
}

template <class T>
Poly<T> derivative(const Poly<T> &p)
{
  if (p.size() <= 1)
    return {T(0)};
  Poly<T> d(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k)
    d[k - 1] = T(int(k)) * p[k];
  return d;
}

template <class T>
Poly<T> multiply(const Poly<T> &a, const Poly<T> &b)
{
  Poly<T> c(a.size() + b.size() - 1, T(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] += a[i] * b[j];
  return c;
}

template <class T>
T max_abs(const Poly<T> &p)
{
  using std::abs;
  T m = T(0);
  for (const auto &c : p)
    m = std::max(m, T(abs(c)));
  return m;
}

/// Divide by (x - a). Returns the quotient; the remainder p(a) goes to *rem.
template <class T>
Poly<T> divide_linear(const Poly<T> &p, const T &a, T *rem = nullptr)
{
  const std::size_t n = p.size();
  Poly<T> q(n - 1, T(0));
  T carry = p[n - 1];
  for (std::size_t k = n - 1; k-- > 0;)
  {
    q[k] = carry;
    carry = p[k] + a * carry;
  }
  if (rem)
    *rem = carry;
  return q;
}

/// Determinant by LU with partial pivoting; `a` is row-major n x n, consumed.
template <class T>
T determinant(std::vector<T> a, int n)
{
  using std::abs;
  using R = decltype(abs(a[0]));
  T det = T(1);
  for (int k = 0; k < n; ++k)
  {
    int piv = k;
    R best = abs(a[k * n + k]);
    for (int i = k + 1; i < n; ++i)
    {
      R v = abs(a[i * n + k]);
      if (v > best)
      {
        best = v;
        piv = i;
      }
    }
    if (best == R(0))
      return T(0);
    if (piv != k)
    {
      for (int j = 0; j < n; ++j)
        std::swap(a[k * n + j], a[piv * n + j]);
      det = -det;
    }
    const T d = a[k * n + k];
    det *= d;
    for (int i = k + 1; i < n; ++i)
    {
      const T f = a[i * n + k] / d;
      if (f == T(0))
        continue;
      for (int j = k + 1; j < n; ++j)
        a[i * n + j] -= f * a[k * n + j];
    }
  }
  return det;
}

/// Chebyshev points of the first kind on [lo, hi].
template <class T>
std::vector<T> chebyshev_nodes(int count, const T &lo, const T &hi)
{
  using std::cos;
  std::vector<T> x(count);
  const T pi = constants<T>::pi();
  for (int k = 0; k < count; ++k)
  {
    const T t = cos(pi * T(2 * k + 1) / T(2 * count));
    x[k] = (lo + hi) / 2 + (hi - lo) / 2 * t;
  }
  return x;
}

/// Interpolate values at chebyshev_nodes(values.size(), -h, h) and return
/// monomial coefficients in x.
template <class T>
Poly<T> chebyshev_to_monomial(const std::vector<T> &values, const T &h)
{
  using std::cos;
  const int n = int(values.size());
  const T pi = constants<T>::pi();
  // Chebyshev coefficients by the discrete orthogonality relation.
  std::vector<T> c(n, T(0));
  for (int j = 0; j < n; ++j)
  {
    T s = T(0);
    for (int k = 0; k < n; ++k)
      s += values[k] * cos(pi * T(j) * T(2 * k + 1) / T(2 * n));
    c[j] = s * T(2) / T(n);
  }
  c[0] /= 2;
  // Clenshaw-style accumulation of T_j(x/h) as monomials.
  Poly<T> tkm1(n, T(0)), tk(n, T(0)), out(n, T(0));
  tkm1[0] = T(1);
  if (n > 1)
    tk[1] = T(1) / h;
  out[0] += c[0];
  for (int i = 0; i < n && n > 1; ++i)
    out[i] += c[1] * tk[i];
  for (int j = 2; j < n; ++j)
  {
    Poly<T> next(n, T(0));
    for (int i = 0; i < n; ++i)
    {
      if (i > 0)
        next[i] += T(2) / h * tk[i - 1];
      next[i] -= tkm1[i];
    }
    for (int i = 0; i < n; ++i)
      out[i] += c[j] * next[i];
    tkm1.swap(tk);
    tk.swap(next);
  }
  return out;
}

/// Coefficients of a real polynomial of degree < n from its values at the
/// n-th roots of unity (a discrete Fourier transform). Only the upper half
/// circle is evaluated; the rest follows by conjugation.
template <class T, class F>
Poly<T> circle_interpolate(F &&f, int n)
{
  using std::cos;
  using std::sin;
  using C = Complex<T>;
  const T pi = constants<T>::pi();
  std::vector<C> unit(n), vals(n);
  for (int k = 0; k < n; ++k)
    unit[k] = C(cos(2 * pi * T(k) / T(n)), sin(2 * pi * T(k) / T(n)));
  for (int k = 0; k <= n / 2; ++k)
    vals[k] = f(unit[k]);
  for (int k = n / 2 + 1; k < n; ++k)
    vals[k] = std::conj(vals[n - k]);
  Poly<T> out(n);
  for (int j = 0; j < n; ++j)
  {
    C s(0);
    for (int k = 0; k < n; ++k)
      s += vals[k] * std::conj(unit[(j * k) % n]);
    out[j] = s.real() / T(n);
  }
  return out;
}

/// Newton divided differences through (x_i, y_i), returned in monomial form.
template <class T>
Poly<T> interpolate_monomial(const std::vector<T> &x, std::vector<T> y)
{
  const std::size_t n = x.size();
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = n - 1; i >= j; --i)
      y[i] = (y[i] - y[i - 1]) / (x[i] - x[i - j]);
  Poly<T> p(n, T(0));
  for (std::size_t k = n; k-- > 0;)
  {
    // p <- p * (t - x_k) + y_k
    Poly<T> q(n, T(0));
    for (std::size_t i = 0; i + 1 < n; ++i)
      q[i + 1] += p[i];
    for (std::size_t i = 0; i < n; ++i)
      q[i] -= x[k] * p[i];
    q[0] += y[k];
    p.swap(q);
  }
  return p;
}

/// Coefficients of p(x + a).
template <class T>
Poly<T> taylor_shift(Poly<T> p, const T &a)
{
  const std::size_t n = p.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t k = n - 2; k + 1 > i; --k)
      p[k] += a * p[k + 1];
  return p;
}

/// Sylvester-matrix resultant of two polynomials with nonzero leading terms.
template <class T>
T resultant(const Poly<T> &p, const Poly<T> &q)
{
  const int m = int(p.size()) - 1;
  const int n = int(q.size()) - 1;
  const int N = m + n;
  if (N == 0)
    return T(1);
  std::vector<T> s(N * N, T(0));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k)
      s[r * N + r + k] = p[m - k];
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k)
      s[(n + r) * N + r + k] = q[n - k];
  return determinant(std::move(s), N);
}

/// Discriminant: (-1)^{n(n-1)/2} Res(p, p') / a_n.
template <class T>
T discriminant(const Poly<T> &p)
{
  const int n = int(p.size()) - 1;
  T r = resultant(p, derivative(p)) / p.back();
  return ((n * (n - 1) / 2) % 2) ? -r : r;
}

/// Roots via eigenvalues of the companion matrix (double precision).
inline std::vector<std::complex<double>> companion_roots(const Poly<double> &p)
{
  int n = int(p.size()) - 1;
  while (n > 0 && p[n] == 0.0)
    --n;
  if (n <= 0)
    return {};
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i)
    c(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i)
    c(i, n - 1) = -p[i] / p[n];
  Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i)
    out[i] = es.eigenvalues()[i];
  return out;
}

/// Simultaneous Aberth-Ehrlich refinement of all roots in precision T.
template <class T>
std::vector<Complex<T>> aberth(const Poly<T> &p, std::vector<Complex<T>> z, int max_iter = 200,
                               const T &rel_tol = T(0))
{
  using std::abs;
  const Poly<T> dp = derivative(p);
  const std::size_t n = z.size();
  const T eps = rel_tol > 0 ? rel_tol : T(std::numeric_limits<T>::epsilon()) * 16;
  for (int it = 0; it < max_iter; ++it)
  {
    T worst = T(0);
    for (std::size_t i = 0; i < n; ++i)
    {
      const Complex<T> pv = horner(p, z[i]);
      const Complex<T> dv = horner(dp, z[i]);
      if (pv == Complex<T>(0) || dv == Complex<T>(0))
        continue;
      const Complex<T> ratio = pv / dv;
      Complex<T> sum(0);
      for (std::size_t j = 0; j < n; ++j)
        if (j != i)
        {
          Complex<T> diff = z[i] - z[j];
          if (diff != Complex<T>(0))
            sum += Complex<T>(1) / diff;
        }
      const Complex<T> w = ratio / (Complex<T>(1) - ratio * sum);
      z[i] -= w;
      const T scale = std::max(T(1), T(abs(z[i])));
      worst = std::max(worst, T(abs(w)) / scale);
    }
    if (worst < eps)
      break;
  }
  return z;
}

/// Roots of p in precision T: double companion seeds, Aberth polish.
template <class T>
std::vector<Complex<T>> poly_roots(const Poly<T> &p, int max_iter = 200)
{
  using std::abs;
  using std::pow;
  // Seeds from p(s y) with s a bound on the root moduli, so that large roots
  // do not swamp the double companion matrix.
  const std::size_t n = p.size() - 1;
  T s = T(1);
  for (std::size_t k = 0; k < n; ++k)
    if (p[k] != T(0))
      s = std::max(s, T(pow(T(abs(p[k] / p[n])), T(1) / T(int(n - k)))));
  if (s < T(1e3))
    s = T(1);
  Poly<double> pd(p.size());
  T sk = T(1);
  for (std::size_t k = 0; k <= n; ++k, sk *= s)
    pd[k] = to_double(p[k] * sk / pow(s, int(n)));
  auto seeds = companion_roots(pd);
  std::vector<Complex<T>> z(seeds.size());
  for (std::size_t i = 0; i < seeds.size(); ++i)
    z[i] = Complex<T>(T(seeds[i].real()), T(seeds[i].imag())) * s;
  if constexpr (std::is_same_v<T, double>)
    return aberth(p, z, 20);
  else
    return aberth(p, z, max_iter);
}

} // namespace cts
