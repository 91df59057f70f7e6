#pragma once

// Equations of motion on the unit sphere (Cartesian form), the same system in
// rotating rescaled coordinates, relative-equilibrium construction and a
// validating integrator.

#include "cts/params.hpp"

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace cts
{

using Vec3 = Eigen::Vector3d;

constexpr int kBodies = 4;

/// Positions and velocities of the four bodies in R^3, constrained to S^2.
struct CartesianState
{
  std::array<Vec3, kBodies> q;
  std::array<Vec3, kBodies> v;
  double t = 0.0;
};

using Accelerations = std::array<Vec3, kBodies>;

/// Rotating rescaled coordinates. Time tau is internal: t = r^{3/2} tau.
struct RotatingState
{
  std::array<double, kBodies> xi{};
  std::array<double, kBodies> eta{};
  std::array<double, kBodies> xi_p{};
  std::array<double, kBodies> eta_p{};
  double tau = 0.0;
};

struct RotatingAccel
{
  std::array<double, kBodies> xi_pp{};
  std::array<double, kBodies> eta_pp{};
};

/// Scalar auxiliaries of the rotating-frame field, indexed [i][j] (0-based
/// bodies; body 0 is the polar mass).
struct AuxiliaryTerms
{
  std::array<std::array<double, kBodies>, kBodies> p{};
  std::array<double, kBodies> rho_sq{};
  std::array<std::array<double, kBodies>, kBodies> z{};
  std::array<std::array<double, kBodies>, kBodies> g{};
  std::array<double, kBodies> h{};
  std::array<std::array<double, kBodies>, kBodies> f{};
  std::array<std::array<int, kBodies>, kBodies> s{};
};

/// Body masses in index order: polar body first.
std::array<double, kBodies> body_masses(const MassConfig &masses);

/// Accelerations of the sphere-constrained 4-body problem.
/// Throws SingularityError on collisions or antipodal pairs.
Accelerations cartesian_field(const CartesianState &state, const MassConfig &masses);

AuxiliaryTerms auxiliary_terms(const RotatingState &state, const DerivedScalars &scalars);

RotatingAccel rotating_field(const RotatingState &state, const MassConfig &masses,
                             const DerivedScalars &scalars);

/// Map a rotating-frame state to the sphere. Body 0 lies in the northern
/// hemisphere, bodies 1..3 on the side selected by sign(z).
CartesianState to_cartesian(const RotatingState &state, const DerivedScalars &scalars);

/// Horizontal (x, y) Cartesian accelerations implied by a rotating-frame
/// acceleration at the given state.
std::array<std::array<double, 2>, kBodies>
horizontal_accel_from_rotating(const RotatingState &state, const RotatingAccel &acc,
                               const DerivedScalars &scalars);

struct EquilibriumState
{
  RotatingState rotating;
  DerivedScalars scalars;
  MassConfig masses;
  double omega_sq; ///< angular velocity squared in original time
  double omega;

  /// Periodic orbit of the Cartesian system at time t.
  CartesianState cartesian_at(double t) const;
  double period() const;
};

/// omega^2 = 24m / (r^3 (12 - 9r^2)^{3/2}) +/- m1 / (r^3 (1 - r^2)^{1/2}),
/// sign from the hemisphere of the triangle.
double orbit_omega_sq(const MassConfig &masses, double z);

EquilibriumState make_equilibrium(const MassConfig &masses, double z);

double energy(const CartesianState &state, const MassConfig &masses);
double angular_momentum_z(const CartesianState &state, const MassConfig &masses);
double constraint_error(const CartesianState &state);

struct TrajectoryRow
{
  CartesianState state;
  double energy;
  double constraint_err;
};

struct Trajectory
{
  std::vector<TrajectoryRow> rows;
  double max_constraint_violation = 0.0;
  double energy_drift = 0.0;           ///< max |E(t) - E(0)|
  double angular_momentum_drift = 0.0; ///< max |L_z(t) - L_z(0)|

  const CartesianState &final_state() const { return rows.back().state; }
  void write_csv(std::ostream &os) const;
};

/// Adaptive embedded Runge-Kutta integration of the Cartesian equations
/// without constraint projection. tol in [1e-14, 1e-6].
Trajectory integrate(const CartesianState &initial, const MassConfig &masses, double t_end,
                     double tol);

} // namespace cts
