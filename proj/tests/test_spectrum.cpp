#include "cts/spectrum.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace cts;

TEST_CASE("frozen spectrum at Gamma = 1, z = 0.5")
{
  SpectrumOptions opt;
  opt.verify = true;
  const auto rep = spectrum_at(MassConfig{1.0, 1.0}, 0.5, opt);
  CHECK(rep.code == ClassCode::E2CS2);
  CHECK_FALSE(rep.degenerate);
  CHECK(rep.verify_error < 1e-10);
  for (int i = 0; i < 6; ++i)
  {
    CHECK(rep.roots[i].real() == doctest::Approx(oracle::roots_g1_z05[i][0]).epsilon(1e-12));
    CHECK(rep.roots[i].imag() == doctest::Approx(oracle::roots_g1_z05[i][1]).epsilon(1e-12));
  }
}

TEST_CASE("precisions agree away from degeneracies")
{
  for (auto [g, z] : {std::pair{1.0, 0.5}, {0.4, -0.6}, {1.5, 0.9}})
  {
    SpectrumOptions d, e;
    e.precision = Precision::Extended;
    const auto a = spectrum_at(MassConfig{1.0, g}, z, d);
    const auto b = spectrum_at(MassConfig{1.0, g}, z, e);
    CHECK(a.code == b.code);
    for (int i = 0; i < 6; ++i)
      CHECK(std::abs(a.roots[i] - b.roots[i]) < 1e-9 * (1 + std::abs(b.roots[i])));
  }
}

TEST_CASE("deflation removes M = 0 and M = -1 exactly")
{
  const auto jb = assemble_blocks_raw(MassConfigT<Extended>{Extended(1), Extended(0.7)}, Extended(0.3));
  const auto d = deflate(pencil_poly(jb), Extended(0.3));
  CHECK(to_double(d.remainder_M) < 1e-40);
  CHECK(to_double(d.remainder_M1) < 1e-40);
  CHECK(d.monic.size() == 7);
  CHECK(to_double(d.monic.back()) == doctest::Approx(1.0));
}

TEST_CASE("class codes from synthetic roots")
{
  auto from_roots = [](std::vector<std::complex<double>> r) {
    Poly<std::complex<double>> p = {1.0};
    for (auto x : r)
      p = multiply(p, Poly<std::complex<double>>{-x, 1.0});
    Poly<double> q;
    for (auto c : p)
      q.push_back(c.real());
    return classify(q).code;
  };
  using C = std::complex<double>;
  CHECK(from_roots({-1, -2, -3, -4, -5, -6}) == ClassCode::E6);
  CHECK(from_roots({-1, -2, -3, -4, C(-1, 1), C(-1, -1)}) == ClassCode::E4CS1);
  CHECK(from_roots({-1, -2, C(-3, 1), C(-3, -1), C(-1, 1), C(-1, -1)}) == ClassCode::E2CS2);
  CHECK(from_roots({-1, -2, -3, -4, -5, 0.5}) == ClassCode::E5H1);
  CHECK(from_roots({-1, -2, -3, 0.5, C(-1, 1), C(-1, -1)}) == ClassCode::E3H1CS1);
  CHECK(from_roots({-1, -2, -3, -4, 0.5, 0.7}) == ClassCode::Other);
}

TEST_CASE("clustered roots are flagged degenerate")
{
  // (M + 1.5)^2 (M + 2)(M + 3)(M + 4)(M + 5)
  Poly<double> p = {1.0};
  for (double r : {-1.5, -1.5, -2.0, -3.0, -4.0, -5.0})
    p = multiply(p, Poly<double>{-r, 1.0});
  CHECK(classify(p).degenerate);
}

TEST_CASE("inadmissible points throw")
{
  CHECK_THROWS_AS(spectrum_at(MassConfig{1.0, 2.0}, -0.5), AdmissibilityError);
}

TEST_CASE("report JSON carries the class")
{
  const auto rep = spectrum_at(MassConfig{1.0, 1.0}, 0.5);
  CHECK(rep.to_json().find("E2CS2") != std::string::npos);
}
