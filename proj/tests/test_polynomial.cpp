#include "cts/polynomial.hpp"

#include <doctest.h>

using namespace cts;

TEST_CASE("division by a linear factor")
{
  // (x - 2)(x + 1)(x - 3) = x^3 - 4x^2 + x + 6
  const Poly<double> p = {6, 1, -4, 1};
  double r = 1;
  const auto q = divide_linear(p, 2.0, &r);
  CHECK(r == doctest::Approx(0.0));
  CHECK(q == Poly<double>{-3, -2, 1});
}

TEST_CASE("discriminant and resultant")
{
  CHECK(discriminant(Poly<double>{-1, 0, 1}) == doctest::Approx(4.0));
  CHECK(discriminant(Poly<double>{1, 2, 1}) == doctest::Approx(0.0));
  // Res(x - 1, x - 3) = -2 (times leading terms)
  CHECK(resultant(Poly<double>{-1, 1}, Poly<double>{-3, 1}) == doctest::Approx(-2.0));
}

TEST_CASE("roots including widely separated magnitudes")
{
  const Poly<double> p = multiply(multiply(Poly<double>{-1e6, 1}, Poly<double>{1, 1}), Poly<double>{2, 0, 1});
  auto r = poly_roots(p);
  REQUIRE(r.size() == 4);
  int found = 0;
  for (auto x : r)
    if (std::abs(x - std::complex<double>(1e6)) < 1e-6 || std::abs(x + 1.0) < 1e-12 ||
        std::abs(std::abs(x.imag()) - std::sqrt(2.0)) < 1e-12)
      ++found;
  CHECK(found == 4);
}

TEST_CASE("extended precision roots")
{
  const Poly<Extended> p = {Extended(-2), Extended(0), Extended(1)};
  const auto r = poly_roots(p);
  Extended best = 1;
  for (const auto &x : r)
    best = std::min(best, Extended(abs(x.real() - sqrt(Extended(2)))));
  CHECK(to_double(best) < 1e-40);
}

TEST_CASE("interpolation helpers")
{
  const Poly<double> p = {1, -2, 0.5, 3};
  auto f = [&](const std::complex<double> &x) { return horner(p, x); };
  const auto c = circle_interpolate<double>(f, 8);
  for (int k = 0; k < 4; ++k)
    CHECK(c[k] == doctest::Approx(p[k]).epsilon(1e-13));
  const auto s = taylor_shift(p, 1.0);
  CHECK(horner(s, 0.5) == doctest::Approx(horner(p, 1.5)));
  const std::vector<double> x = {0, 1, 2, 3};
  std::vector<double> y;
  for (double t : x)
    y.push_back(horner(p, t));
  const auto m = interpolate_monomial(x, y);
  for (int k = 0; k < 4; ++k)
    CHECK(m[k] == doctest::Approx(p[k]).epsilon(1e-12));
}
