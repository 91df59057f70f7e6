#include "cts/dynamics.hpp"

#include <Eigen/Geometry>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cts
{

namespace
{

constexpr double kCollisionTol = 1e-12;

void check_pair(double c)
{
  if (1.0 - c * c < kCollisionTol)
    throw SingularityError(c > 0 ? "collision" : "antipodal pair");
}

Accelerations accel_unchecked(const std::array<Vec3, kBodies> &q,
                              const std::array<Vec3, kBodies> &v,
                              const std::array<double, kBodies> &mass)
{
  Accelerations a;
  for (int i = 0; i < kBodies; ++i)
  {
    Vec3 acc = -v[i].squaredNorm() * q[i];
    for (int j = 0; j < kBodies; ++j)
    {
      if (j == i || mass[j] == 0.0)
        continue;
      const double c = q[i].dot(q[j]);
      check_pair(c);
      const double d = 1.0 - c * c;
      acc += mass[j] * (q[j] - c * q[i]) / (d * std::sqrt(d));
    }
    a[i] = acc;
  }
  return a;
}

double omega_of(const DerivedScalars &ds)
{
  if (!(ds.omega_sq > 0))
    throw AdmissibilityError("rotating frame requires Omega^2 > 0");
  return std::sqrt(ds.omega_sq);
}

int hemisphere(int i, const DerivedScalars &ds) { return i == 0 ? 1 : ds.s; }

} // namespace

std::array<double, kBodies> body_masses(const MassConfig &masses)
{
  masses.validate();
  return {masses.m1, masses.m, masses.m, masses.m};
}

double constraint_error(const CartesianState &state)
{
  double err = 0.0;
  for (int i = 0; i < kBodies; ++i)
  {
    err = std::max(err, std::abs(state.q[i].squaredNorm() - 1.0));
    err = std::max(err, std::abs(state.q[i].dot(state.v[i])));
  }
  return err;
}

Accelerations cartesian_field(const CartesianState &state, const MassConfig &masses)
{
  const auto mass = body_masses(masses);
  for (int i = 0; i < kBodies; ++i)
    for (int j = i + 1; j < kBodies; ++j)
      check_pair(state.q[i].dot(state.q[j]));
  if (constraint_error(state) > 1e-9)
    throw DomainError("state violates the sphere constraint");
  return accel_unchecked(state.q, state.v, mass);
}

AuxiliaryTerms auxiliary_terms(const RotatingState &st, const DerivedScalars &ds)
{
  const double r2 = ds.r * ds.r;
  const double om = omega_of(ds);
  AuxiliaryTerms a;
  for (int i = 0; i < kBodies; ++i)
  {
    a.rho_sq[i] = st.xi[i] * st.xi[i] + st.eta[i] * st.eta[i];
    if (r2 * a.rho_sq[i] > 1.0)
      throw DomainError("rotating coordinates leave the sphere");
  }
  for (int i = 0; i < kBodies; ++i)
  {
    const double w = 1.0 - r2 * a.rho_sq[i];
    const double radial = st.xi[i] * st.xi_p[i] + st.eta[i] * st.eta_p[i];
    a.h[i] = ds.omega_sq * a.rho_sq[i] + 2.0 * om * (st.xi[i] * st.eta_p[i] - st.eta[i] * st.xi_p[i]) +
             st.xi_p[i] * st.xi_p[i] + st.eta_p[i] * st.eta_p[i];
    if (radial != 0.0)
    {
      if (w <= 0.0)
        throw SingularityError("vertical velocity unbounded at the equator");
      a.h[i] += r2 / w * radial * radial;
    }
    for (int j = 0; j < kBodies; ++j)
    {
      a.s[i][j] = (i == 0 || j == 0) ? ds.s : 1;
      a.p[i][j] = st.xi[i] * st.xi[j] + st.eta[i] * st.eta[j];
      a.z[i][j] = (1.0 - r2 * a.rho_sq[i]) * (1.0 - r2 * a.rho_sq[j]);
      const double sq = std::sqrt(a.z[i][j]);
      a.g[i][j] = a.rho_sq[i] + a.rho_sq[j] - 2.0 * a.s[i][j] * a.p[i][j] * sq -
                  r2 * (a.p[i][j] * a.p[i][j] + a.rho_sq[i] * a.rho_sq[j]);
      a.f[i][j] = r2 * a.p[i][j] + a.s[i][j] * sq;
    }
  }
  return a;
}

RotatingAccel rotating_field(const RotatingState &st, const MassConfig &masses,
                             const DerivedScalars &ds)
{
  const auto mass = body_masses(masses);
  const auto a = auxiliary_terms(st, ds);
  const double om = omega_of(ds);
  const double r2 = ds.r * ds.r;
  RotatingAccel out;
  for (int i = 0; i < kBodies; ++i)
  {
    double fx = 2.0 * om * st.eta_p[i] + (ds.omega_sq - r2 * a.h[i]) * st.xi[i];
    double fy = -2.0 * om * st.xi_p[i] + (ds.omega_sq - r2 * a.h[i]) * st.eta[i];
    for (int j = 0; j < kBodies; ++j)
    {
      if (j == i || mass[j] == 0.0)
        continue;
      // 1 - f^2 = r^2 g; compare on the same scale as the Cartesian check.
      if (r2 * a.g[i][j] < kCollisionTol)
        throw SingularityError("collision in rotating coordinates");
      const double k = mass[j] / (a.g[i][j] * std::sqrt(a.g[i][j]));
      fx += k * (st.xi[j] - a.f[i][j] * st.xi[i]);
      fy += k * (st.eta[j] - a.f[i][j] * st.eta[i]);
    }
    out.xi_pp[i] = fx;
    out.eta_pp[i] = fy;
  }
  return out;
}

CartesianState to_cartesian(const RotatingState &st, const DerivedScalars &ds)
{
  const double om = omega_of(ds);
  const double r = ds.r;
  const double r2 = r * r;
  const double th = om * st.tau;
  const double c = std::cos(th), s = std::sin(th);
  const double vscale = 1.0 / std::sqrt(r);
  CartesianState out;
  out.t = r * std::sqrt(r) * st.tau;
  for (int i = 0; i < kBodies; ++i)
  {
    const double X = c * st.xi[i] - s * st.eta[i];
    const double Y = s * st.xi[i] + c * st.eta[i];
    // X' = R (xi' + Omega J xi), J the quarter turn.
    const double dxi = st.xi_p[i] - om * st.eta[i];
    const double deta = st.eta_p[i] + om * st.xi[i];
    const double Xp = c * dxi - s * deta;
    const double Yp = s * dxi + c * deta;
    const double rho2 = st.xi[i] * st.xi[i] + st.eta[i] * st.eta[i];
    const double w = std::sqrt(std::max(0.0, 1.0 - r2 * rho2));
    const int sig = hemisphere(i, ds);
    out.q[i] = Vec3(r * X, r * Y, sig * w);
    const double radial = st.xi[i] * st.xi_p[i] + st.eta[i] * st.eta_p[i];
    const double wz = radial == 0.0 ? 0.0 : -sig * r2 * radial / w;
    out.v[i] = Vec3(Xp * vscale, Yp * vscale, wz / (r * std::sqrt(r)));
  }
  return out;
}

std::array<std::array<double, 2>, kBodies>
horizontal_accel_from_rotating(const RotatingState &st, const RotatingAccel &acc,
                               const DerivedScalars &ds)
{
  const double om = omega_of(ds);
  const double th = om * st.tau;
  const double c = std::cos(th), s = std::sin(th);
  const double r2 = ds.r * ds.r;
  std::array<std::array<double, 2>, kBodies> out{};
  for (int i = 0; i < kBodies; ++i)
  {
    const double u = acc.xi_pp[i] - ds.omega_sq * st.xi[i] - 2.0 * om * st.eta_p[i];
    const double w = acc.eta_pp[i] - ds.omega_sq * st.eta[i] + 2.0 * om * st.xi_p[i];
    out[i][0] = (c * u - s * w) / r2;
    out[i][1] = (s * u + c * w) / r2;
  }
  return out;
}

double orbit_omega_sq(const MassConfig &masses, double z)
{
  if (z == 0.0 || std::abs(z) >= 1.0)
    throw DomainError("latitude z must lie in (-1,0) U (0,1)");
  const double r2 = 1.0 - z * z;
  const double r = std::sqrt(r2);
  const double r3 = r2 * r;
  const double a = 12.0 - 9.0 * r2;
  const double sign = z > 0 ? 1.0 : -1.0;
  return 24.0 * masses.m / (r3 * a * std::sqrt(a)) + sign * masses.m1 / (r3 * std::sqrt(1.0 - r2));
}

EquilibriumState make_equilibrium(const MassConfig &masses, double z)
{
  const auto ds = derived_scalars(masses, z);
  if (!ds.admissible())
    throw AdmissibilityError("no tetrahedral relative equilibrium: Omega^2 <= 0");
  EquilibriumState eq;
  eq.scalars = ds;
  eq.masses = masses;
  const double h = std::sqrt(3.0) / 2.0;
  eq.rotating.xi = {0.0, 1.0, -0.5, -0.5};
  eq.rotating.eta = {0.0, 0.0, h, -h};
  eq.omega_sq = orbit_omega_sq(masses, z);
  eq.omega = std::sqrt(eq.omega_sq);
  return eq;
}

CartesianState EquilibriumState::cartesian_at(double t) const
{
  CartesianState out;
  out.t = t;
  const double r = scalars.r;
  const double zc = scalars.z;
  out.q[0] = Vec3(0.0, 0.0, 1.0);
  out.v[0] = Vec3::Zero();
  const double tau = 2.0 * constants<double>::pi() / 3.0;
  for (int k = 0; k < 3; ++k)
  {
    const double ph = omega * t + k * tau;
    out.q[k + 1] = Vec3(r * std::cos(ph), r * std::sin(ph), zc);
    out.v[k + 1] = Vec3(-r * omega * std::sin(ph), r * omega * std::cos(ph), 0.0);
  }
  return out;
}

double EquilibriumState::period() const { return 2.0 * constants<double>::pi() / omega; }

double energy(const CartesianState &state, const MassConfig &masses)
{
  const auto mass = body_masses(masses);
  double kin = 0.0, pot = 0.0;
  for (int i = 0; i < kBodies; ++i)
  {
    kin += 0.5 * mass[i] * state.v[i].squaredNorm();
    for (int j = i + 1; j < kBodies; ++j)
    {
      const double c = state.q[i].dot(state.q[j]);
      check_pair(c);
      const double d = std::atan2(state.q[i].cross(state.q[j]).norm(), c);
      pot -= mass[i] * mass[j] / std::tan(d);
    }
  }
  return kin + pot;
}

double angular_momentum_z(const CartesianState &state, const MassConfig &masses)
{
  const auto mass = body_masses(masses);
  double L = 0.0;
  for (int i = 0; i < kBodies; ++i)
    L += mass[i] * (state.q[i].x() * state.v[i].y() - state.q[i].y() * state.v[i].x());
  return L;
}

void Trajectory::write_csv(std::ostream &os) const
{
  os << "t";
  for (const char *pre : {"", "v"})
    for (int i = 1; i <= kBodies; ++i)
      for (const char *c : {"x", "y", "z"})
        os << ',' << pre << c << i;
  os << ",energy,constraint_err\n";
  os.precision(17);
  for (const auto &row : rows)
  {
    os << row.state.t;
    for (int i = 0; i < kBodies; ++i)
      for (int k = 0; k < 3; ++k)
        os << ',' << row.state.q[i][k];
    for (int i = 0; i < kBodies; ++i)
      for (int k = 0; k < 3; ++k)
        os << ',' << row.state.v[i][k];
    os << ',' << row.energy << ',' << row.constraint_err << '\n';
  }
}

Trajectory integrate(const CartesianState &initial, const MassConfig &masses, double t_end,
                     double tol)
{
  namespace ode = boost::numeric::odeint;
  using Vec = std::array<double, 6 * kBodies>;

  if (!(tol >= 1e-14 && tol <= 1e-6))
    throw DomainError("integration tolerance must lie in [1e-14, 1e-6]");
  if (!(t_end > initial.t))
    throw DomainError("t_end must exceed the initial time");
  if (constraint_error(initial) > 1e-9)
    throw DomainError("initial state violates the sphere constraint");

  const auto mass = body_masses(masses);
  auto pack = [](const CartesianState &s) {
    Vec x{};
    for (int i = 0; i < kBodies; ++i)
      for (int k = 0; k < 3; ++k)
      {
        x[3 * i + k] = s.q[i][k];
        x[3 * kBodies + 3 * i + k] = s.v[i][k];
      }
    return x;
  };
  auto unpack = [](const Vec &x, double t) {
    CartesianState s;
    s.t = t;
    for (int i = 0; i < kBodies; ++i)
    {
      s.q[i] = Vec3(x[3 * i], x[3 * i + 1], x[3 * i + 2]);
      s.v[i] = Vec3(x[3 * kBodies + 3 * i], x[3 * kBodies + 3 * i + 1], x[3 * kBodies + 3 * i + 2]);
    }
    return s;
  };

  auto rhs = [&](const Vec &x, Vec &dx, double t) {
    const auto s = unpack(x, t);
    const auto a = accel_unchecked(s.q, s.v, mass);
    for (int i = 0; i < kBodies; ++i)
      for (int k = 0; k < 3; ++k)
      {
        dx[3 * i + k] = s.v[i][k];
        dx[3 * kBodies + 3 * i + k] = a[i][k];
      }
  };

  Trajectory traj;
  const double e0 = energy(initial, masses);
  const double l0 = angular_momentum_z(initial, masses);
  auto observe = [&](const Vec &x, double t) {
    const auto s = unpack(x, t);
    TrajectoryRow row{s, energy(s, masses), constraint_error(s)};
    traj.max_constraint_violation = std::max(traj.max_constraint_violation, row.constraint_err);
    traj.energy_drift = std::max(traj.energy_drift, std::abs(row.energy - e0));
    traj.angular_momentum_drift =
        std::max(traj.angular_momentum_drift, std::abs(angular_momentum_z(s, masses) - l0));
    traj.rows.push_back(std::move(row));
  };

  Vec x = pack(initial);
  auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<Vec>());
  const double dt0 = std::min(1e-3, (t_end - initial.t) / 100.0);
  try
  {
    ode::integrate_adaptive(stepper, rhs, x, initial.t, t_end, dt0, observe);
  }
  catch (const ode::step_adjustment_error &e)
  {
    throw StepFailure(e.what());
  }
  catch (const ode::no_progress_error &e)
  {
    throw StepFailure(e.what());
  }
  return traj;
}

} // namespace cts
