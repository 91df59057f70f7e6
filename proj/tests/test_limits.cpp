#include "cts/limits.hpp"
#include "cts/spectrum.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cts;

TEST_CASE("closed-form limit scalars")
{
  CHECK(exact_solution_M0(0.3) == doctest::Approx(oracle::M0_z03).epsilon(1e-15));
  CHECK(restricted_c(0.3) == doctest::Approx(oracle::restricted_c_z03).epsilon(1e-15));
}

TEST_CASE("three-body factor contains 0, -1 and M0")
{
  const auto rs = restricted_spectrum(Extended(0.3));
  CHECK(to_double(rs.M0) == doctest::Approx(oracle::M0_z03));
  CHECK(rs.Q.size() == 4);
  for (const auto &q : rs.q_roots)
    CHECK(to_double(abs(horner(rs.Q, q))) < 1e-35);
}

TEST_CASE("Gamma = 0 spectrum is the three-body factor times the pair")
{
  // At Gamma = 0 the reduced sextic factors as Q(M) times the restricted pair.
  const double z = 0.45;
  const auto p = reduced_poly(MassConfigT<Extended>{Extended(1), Extended(0)}, Extended(z));
  const auto q = multiply(q_cubic(Extended(z)), restricted_pair_poly(Extended(z)));
  REQUIRE(q.size() == 6);
  // q is the monic quintic after removing M0; compare the roots instead.
  const auto rp = poly_roots(p);
  const auto rs = restricted_spectrum(Extended(z));
  std::vector<Complex<Extended>> expect(rs.q_roots.begin(), rs.q_roots.end());
  expect.push_back(Complex<Extended>(rs.M0));
  expect.push_back(rs.m_pair[0]);
  expect.push_back(rs.m_pair[1]);
  int matched = 0;
  for (const auto &e : expect)
    for (const auto &r : rp)
      if (to_double(abs(e - r)) < 1e-20)
      {
        ++matched;
        break;
      }
  CHECK(matched >= 6);
}

TEST_CASE("critical latitudes are roots of the limit conditions")
{
  // Gamma = 0 double roots of Q on the northern side.
  for (double z : {oracle::z1, oracle::z2, oracle::z3})
  {
    const double lo = to_double(q_discriminant(Extended(-z - 1e-9)));
    const double hi = to_double(q_discriminant(Extended(-z + 1e-9)));
    CHECK(lo * hi <= 0);
  }
}

TEST_CASE("eps branches approach the roots")
{
  const double z = 0.3, eps = 1e-5;
  const auto br = eps_branches(z, eps);
  const auto p = eps_poly(eps, z);
  // The pair and the middle root carry errors of order eps^1.5 or better.
  for (int i = 0; i < 3; ++i)
  {
    double best = 1e300;
    for (auto r : poly_roots(p))
      best = std::min(best, std::abs(r - br[i].value));
    CHECK(best < 10 * std::pow(eps, 1.5));
  }
  CHECK_THROWS_AS(eps_branches(-0.3, eps), DomainError);
  CHECK_THROWS_AS(eps_branches(0.3, 0.5), DomainError);
}

TEST_CASE("near-origin curves scale as expected")
{
  const double g1 = near00_gamma_eh(-1e-3), g2 = near00_gamma_eh(-2e-3);
  CHECK(g1 > 0);
  CHECK(std::log(g2 / g1) / std::log(2.0) == doctest::Approx(3.0).epsilon(0.02));
}
