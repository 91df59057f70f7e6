#include "cts/params.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cts;

TEST_CASE("derived scalars at a northern point")
{
  const auto ds = derived_scalars(MassConfig{1.0, 1.0}, 0.5);
  CHECK(ds.omega_sq == doctest::Approx(oracle::omega_sq_g1_z05).epsilon(1e-14));
  CHECK(ds.admissible());
  CHECK(ds.s == 1);
  CHECK(ds.r == doctest::Approx(std::sqrt(0.75)));
  CHECK(omega_sq_alt(MassConfig{1.0, 1.0}, ds) == doctest::Approx(ds.omega_sq).epsilon(1e-14));
}

TEST_CASE("southern boundary and forbidden side")
{
  CHECK(gamma_star(-0.5) == doctest::Approx(oracle::gamma_star_zm05).epsilon(1e-14));
  const double gs = gamma_star(-0.5);
  CHECK(derived_scalars(MassConfig{1.0, 0.9 * gs}, -0.5).admissible());
  CHECK(derived_scalars(MassConfig{1.0, 1.1 * gs}, -0.5).status == Admissibility::Forbidden);
  CHECK(derived_scalars(MassConfig{1.0, gs}, -0.5).status == Admissibility::Boundary);
}

TEST_CASE("input validation")
{
  CHECK_THROWS_AS(derived_scalars(MassConfig{1.0, 1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(derived_scalars(MassConfig{1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(derived_scalars(MassConfig{0.0, 1.0}, 0.5), DomainError);
  CHECK_THROWS_AS(MassConfig::from_gamma(-1.0), DomainError);
  CHECK_THROWS_AS(gamma_star(0.3), DomainError);
  CHECK(MassConfig::from_epsilon(0.01).gamma() == doctest::Approx(100.0));
}

TEST_CASE("existence thresholds")
{
  CHECK(thresholds::existence_gamma() == doctest::Approx(oracle::existence_gamma).epsilon(1e-15));
  CHECK(thresholds::unique_root_gamma() == doctest::Approx(oracle::unique_root_gamma).epsilon(1e-15));
  CHECK(thresholds::g_max() == doctest::Approx(oracle::g_max).epsilon(1e-15));
  const auto prof = existence_profile(0.5, 1.0 / std::sqrt(2.0));
  CHECK(prof.g == doctest::Approx(oracle::g_max).epsilon(1e-12));
}

TEST_CASE("existence root counts")
{
  // Above the existence threshold no southern solution exists.
  CHECK(existence_solve(MassConfig{1.0, 1.2}, 0.01).count == 0);
  // Small Gamma: exactly one root for small Omega^2.
  const auto one = existence_solve(MassConfig{1.0, 0.3}, 0.05);
  REQUIRE(one.count == 1);
  const double u = one.roots[0];
  CHECK(derived_scalars(MassConfig{1.0, 0.3}, -u).omega_sq == doctest::Approx(0.05).epsilon(1e-9));
  // Between the thresholds two roots appear below the maximum of F.
  const auto two = existence_solve(MassConfig{1.0, 0.8}, 0.01);
  CHECK(two.count == 2);
  CHECK(two.has_u1);
}
