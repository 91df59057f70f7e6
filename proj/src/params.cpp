#include "cts/params.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace cts
{

namespace
{

const double kSqrt3 = std::sqrt(3.0);

double F_of(double gamma, double u)
{
  const double w = 1.0 + 3.0 * u * u;
  return -gamma / u + 8.0 / (kSqrt3 * w * std::sqrt(w));
}

double g_of(double u)
{
  const double w = 1.0 + 3.0 * u * u;
  return 72.0 * u * u * u / (kSqrt3 * w * w * std::sqrt(w));
}

// Bisection to an interval of relative width 1e-14, then secant polish kept
// inside the final bracket.
double bracketed_root(const std::function<double(double)> &f, double a, double b)
{
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0)
    return a;
  if (fb == 0.0)
    return b;
  if ((fa > 0) == (fb > 0))
    throw ConvergenceError("bracketed_root: no sign change");

  constexpr int kMaxIter = 200;
  int it = 0;
  for (; it < kMaxIter; ++it)
  {
    const double mid = 0.5 * (a + b);
    if (b - a <= 1e-14 * std::max(std::abs(mid), 1e-300))
      break;
    const double fm = f(mid);
    if (fm == 0.0)
      return mid;
    if ((fm > 0) == (fa > 0))
    {
      a = mid;
      fa = fm;
    }
    else
    {
      b = mid;
      fb = fm;
    }
  }
  if (it == kMaxIter)
    throw ConvergenceError("bracketed_root: tolerance 1e-14 not reached in 200 iterations");

  double x = a - fa * (b - a) / (fb - fa);
  for (int k = 0; k < 3; ++k)
  {
    const double fx = f(x);
    if (fx == 0.0)
      break;
    if ((fx > 0) == (fa > 0))
    {
      a = x;
      fa = fx;
    }
    else
    {
      b = x;
      fb = fx;
    }
    if (fb == fa)
      break;
    x = a - fa * (b - a) / (fb - fa);
  }
  return x;
}

} // namespace

ExistenceProfile existence_profile(double gamma, double u)
{
  if (!(u > 0.0) || !(u < 1.0))
    throw DomainError("existence_profile requires u in (0, 1)");
  if (gamma < 0.0)
    throw DomainError("existence_profile requires gamma >= 0");
  return {F_of(gamma, u), g_of(u)};
}

ExistenceBranch existence_solve(const MassConfig &cfg, double omega_sq)
{
  cfg.validate();
  if (!(omega_sq > 0.0))
    throw DomainError("existence_solve requires omega_sq > 0");

  const double gamma = cfg.gamma();
  const double target = omega_sq / cfg.m;
  const double u_peak = 1.0 / std::sqrt(2.0);
  ExistenceBranch out;

  // Critical points solve g(u) = Gamma; g rises on (0, 1/sqrt2) and decays after.
  if (gamma > 0.0 && gamma < thresholds::g_max())
  {
    auto h = [gamma](double u) { return g_of(u) - gamma; };
    out.u1 = bracketed_root(h, 1e-300, u_peak);
    out.has_u1 = out.u1 < 1.0;
    out.u2 = bracketed_root(h, u_peak, 1e3);
    out.has_u2 = true;
  }

  // Monotone pieces of F on (0, 1).
  std::vector<double> cuts{0.0};
  if (out.has_u1)
    cuts.push_back(out.u1);
  if (out.has_u2 && out.u2 < 1.0)
    cuts.push_back(out.u2);
  cuts.push_back(1.0);

  auto F_at = [gamma](double u) {
    if (u <= 0.0)
      return gamma > 0.0 ? -HUGE_VAL : 8.0 / kSqrt3;
    return F_of(gamma, u);
  };

  out.f_max = -HUGE_VAL;
  for (double c : cuts)
    out.f_max = std::max(out.f_max, F_at(c));

  if (out.has_u1 && std::abs(target - out.f_max) <= 1e-12 * std::max(1.0, std::abs(target)))
  {
    out.count = 1;
    out.roots.push_back(out.u1);
    return out;
  }

  auto h = [gamma, target](double u) { return F_of(gamma, u) - target; };
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k)
  {
    const double a = cuts[k];
    const double b = cuts[k + 1];
    const double ha = F_at(a) - target;
    const double hb = F_at(b) - target;
    if ((ha < 0) == (hb < 0) || hb == 0.0)
      continue;
    const double lo = a > 0.0 ? a : 1e-300;
    out.roots.push_back(bracketed_root(h, lo, b));
  }
  out.count = static_cast<int>(out.roots.size());
  return out;
}

} // namespace cts
