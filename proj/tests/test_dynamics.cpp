#include "cts/dynamics.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <sstream>

using namespace cts;

TEST_CASE("relative equilibrium returns after one period")
{
  const MassConfig m{1.0, 1.0};
  const auto eq = make_equilibrium(m, 0.5);
  CHECK(eq.period() == doctest::Approx(oracle::period_g1_z05).epsilon(1e-12));
  const auto tr = integrate(eq.cartesian_at(0.0), m, eq.period(), 1e-12);
  const auto ref = eq.cartesian_at(eq.period());
  double dev = 0;
  for (int i = 0; i < kBodies; ++i)
    dev = std::max(dev, (tr.final_state().q[i] - ref.q[i]).cwiseAbs().maxCoeff());
  CHECK(dev < 1e-9);
  CHECK(tr.energy_drift < 1e-9);
  CHECK(tr.max_constraint_violation < 1e-9);
}

TEST_CASE("equilibrium state lies on the sphere")
{
  const auto eq = make_equilibrium(MassConfig{1.0, 0.3}, -0.4);
  const auto s = eq.cartesian_at(0.7);
  CHECK(constraint_error(s) < 1e-14);
}

TEST_CASE("conserved quantities are invariant under the rigid rotation")
{
  const MassConfig m{1.0, 0.5};
  const auto eq = make_equilibrium(m, 0.6);
  const auto a = eq.cartesian_at(0.0), b = eq.cartesian_at(1.3);
  CHECK(energy(b, m) == doctest::Approx(energy(a, m)).epsilon(1e-13));
  CHECK(angular_momentum_z(b, m) == doctest::Approx(angular_momentum_z(a, m)).epsilon(1e-13));
}

TEST_CASE("trajectory CSV layout")
{
  const MassConfig m{1.0, 1.0};
  const auto eq = make_equilibrium(m, 0.5);
  const auto tr = integrate(eq.cartesian_at(0.0), m, 0.1, 1e-10);
  std::ostringstream os;
  tr.write_csv(os);
  const auto s = os.str();
  CHECK(s.rfind("t,x1,y1,z1", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == long(tr.rows.size()) + 1);
}

TEST_CASE("integrator rejects out-of-range tolerances")
{
  const MassConfig m{1.0, 1.0};
  const auto eq = make_equilibrium(m, 0.5);
  CHECK_THROWS_AS(integrate(eq.cartesian_at(0.0), m, 1.0, 1e-3), DomainError);
}
