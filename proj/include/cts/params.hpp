#pragma once

// Closed-form scalars of the tetrahedral configuration and the existence
// analysis for the southern (z < 0) branch.

#include "cts/types.hpp"

#include <vector>

namespace cts
{

/// Masses of the configuration: one body of mass m1 at the north pole and
/// three equal bodies of mass m on a rotating equilateral triangle.
template <class T>
struct MassConfigT
{
  T m{1};
  T m1{0};

  static MassConfigT from_gamma(const T &gamma, const T &m = T(1))
  {
    MassConfigT cfg{m, gamma * m};
    cfg.validate();
    return cfg;
  }

  /// Large-ratio parameterisation: m1 = 1, m = epsilon.
  static MassConfigT from_epsilon(const T &epsilon)
  {
    MassConfigT cfg{epsilon, T(1)};
    cfg.validate();
    return cfg;
  }

  T gamma() const { return m1 / m; }

  T epsilon() const
  {
    if (!(m1 > 0))
      throw DomainError("epsilon = m/m1 is undefined for m1 = 0");
    return m / m1;
  }

  void validate() const
  {
    if (!(m > 0))
      throw DomainError("mass m must be positive");
    if (m1 < 0)
      throw DomainError("mass m1 must be nonnegative");
  }

  template <class U>
  MassConfigT<U> as() const
  {
    return MassConfigT<U>{U(m), U(m1)};
  }
};

using MassConfig = MassConfigT<double>;

enum class Admissibility
{
  Admissible,
  Boundary,  ///< |Omega^2| below 1e-12 m; treated as the excluded limit.
  Forbidden, ///< Omega^2 < 0, no relative equilibrium.
};

template <class T>
struct DerivedScalarsT
{
  T z;        ///< latitude of the triangle
  T r;        ///< circle radius sqrt(1 - z^2)
  int s;      ///< sign of z
  T G;        ///< (3/4)(1 + 3 z^2)
  T D;        ///< G^{-5/2} = alpha (1 + 3 z^2)^{-5/2}
  T omega_sq; ///< rescaled angular velocity squared
  Admissibility status;

  bool admissible() const { return status == Admissibility::Admissible; }
};

using DerivedScalars = DerivedScalarsT<double>;

/// Omega^2 = m (Gamma/z + 8 / (sqrt3 (1+3z^2)^{3/2})).
/// Same as derived_scalars but without the mass-sign check; formulas are
/// polynomial in m1, so a slightly negative value is meaningful to callers
/// that continue curves across Gamma = 0.
template <class T>
DerivedScalarsT<T> derived_scalars_unchecked(const MassConfigT<T> &cfg, const T &z)
{
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (!(cfg.m > 0))
    throw DomainError("mass m must be positive");
  if (z == 0 || abs(z) >= 1)
    throw DomainError("latitude z must lie in (-1,0) U (0,1)");

  DerivedScalarsT<T> out;
  const T z2 = z * z;
  const T w = 1 + 3 * z2;
  out.z = z;
  out.r = sqrt(1 - z2);
  out.s = z > 0 ? 1 : -1;
  out.G = T(3) * w / 4;
  out.D = constants<T>::alpha() / (w * w * sqrt(w));
  out.omega_sq = cfg.m * (cfg.gamma() / z + T(8) / (constants<T>::sqrt3() * w * sqrt(w)));

  if (abs(out.omega_sq) < T(1e-12) * cfg.m)
    out.status = Admissibility::Boundary;
  else if (out.omega_sq < 0)
    out.status = Admissibility::Forbidden;
  else
    out.status = Admissibility::Admissible;
  return out;
}

template <class T>
DerivedScalarsT<T> derived_scalars(const MassConfigT<T> &cfg, const T &z)
{
  cfg.validate();
  return derived_scalars_unchecked(cfg, z);
}

/// Second form of the angular velocity: m1/z + 3 m G^{-3/2}.
template <class T>
T omega_sq_alt(const MassConfigT<T> &cfg, const DerivedScalarsT<T> &ds)
{
  using std::sqrt;
  return cfg.m1 / ds.z + 3 * cfg.m / (ds.G * sqrt(ds.G));
}

/// Existence boundary for z < 0: the mass ratio at which Omega^2 vanishes.
template <class T>
T gamma_star(const T &z)
{
  using std::sqrt;
  if (!(z < 0) || !(z > -1))
    throw DomainError("gamma_star requires z in (-1, 0)");
  const T w = 1 + 3 * z * z;
  return -8 * z / (constants<T>::sqrt3() * w * sqrt(w));
}

// ---------------------------------------------------------------------------
// Existence on the southern branch, u = -z in (0, 1).

struct ExistenceProfile
{
  double F; ///< F(u; Gamma) = Omega^2 / m
  double g; ///< critical-point function: F'(u) = (Gamma - g(u)) / u^2
};

ExistenceProfile existence_profile(double gamma, double u);

struct ExistenceBranch
{
  int count = 0;
  std::vector<double> roots;
  double u1 = 0.0; ///< maximum of F on (0, 1); 0 when F has no interior critical point
  double u2 = 0.0; ///< minimum of F; may lie outside (0, 1)
  bool has_u1 = false;
  bool has_u2 = false;
  double f_max = 0.0; ///< supremum of F on (0, 1)
};

/// Solve m F(u; Gamma) = omega_sq for u in (0, 1).
ExistenceBranch existence_solve(const MassConfig &cfg, double omega_sq);

namespace thresholds
{
/// Gamma below which a unique root exists for small Omega^2.
inline double unique_root_gamma() { return 1.0 / std::sqrt(3.0); }
/// Gamma above which no southern equilibria exist.
inline double existence_gamma() { return 16.0 / (9.0 * std::sqrt(3.0)); }
/// Maximum of g(u), attained at u = 1/sqrt(2).
inline double g_max() { return 144.0 / (25.0 * std::sqrt(15.0)); }
} // namespace thresholds

} // namespace cts
