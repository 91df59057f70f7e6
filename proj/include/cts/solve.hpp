#pragma once

// Scalar root bracketing and refinement in any floating type.

#include "cts/types.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace cts
{

/// TOMS 748 on [a, b]; the sign of f must differ at the ends.
template <class T, class F>
T solve_bracketed(F &&f, T a, T b, int bits, std::uintmax_t max_iter = 400)
{
  T fa = f(a);
  T fb = f(b);
  if (fa == 0)
    return a;
  if (fb == 0)
    return b;
  if ((fa > 0) == (fb > 0))
    throw ConvergenceError("solve_bracketed: no sign change in bracket");
  std::uintmax_t it = max_iter;
  boost::math::tools::eps_tolerance<T> tol(bits);
  auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, it);
  if (it >= max_iter)
    throw ConvergenceError("solve_bracketed: iteration limit reached");
  return (r.first + r.second) / 2;
}

/// Full precision of T for solve_bracketed.
template <class T>
int full_bits()
{
  return std::numeric_limits<T>::digits - 3;
}

/// Sample f on n+1 equispaced points of [a, b] and return the subintervals
/// whose end values differ in sign.
template <class T, class F>
std::vector<std::pair<T, T>> sign_changes(F &&f, const T &a, const T &b, int n)
{
  std::vector<std::pair<T, T>> out;
  T xp = a;
  T fp = f(a);
  for (int i = 1; i <= n; ++i)
  {
    const T x = a + (b - a) * T(i) / T(n);
    const T fx = f(x);
    if ((fx > 0) != (fp > 0) || fx == 0)
      out.emplace_back(xp, x);
    xp = x;
    fp = fx;
  }
  return out;
}

} // namespace cts
