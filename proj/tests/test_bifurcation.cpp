#include "cts/bifurcation.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>

using namespace cts;

TEST_CASE("transition along Gamma = 0 near z3")
{
  const PathSegment path{1e-9, -oracle::z3 - 0.01, 1e-9, -oracle::z3 + 0.01};
  const auto br = detect_transitions(path, 40);
  REQUIRE(!br.empty());
  const auto pt = refine_point(br.front(), BifKind::HH);
  CHECK(pt.kind == BifKind::HH);
  CHECK(pt.z == doctest::Approx(-oracle::z3).epsilon(1e-6));
  CHECK(pt.M_crit.real() < 0);
}

TEST_CASE("class change across a vertical segment is detected")
{
  // The forbidden boundary is crossed going up in Gamma at z = -0.5.
  const PathSegment path{0.5, -0.5, 1.5, -0.5};
  const auto br = detect_transitions(path, 50);
  bool boundary = false;
  for (const auto &b : br)
    boundary |= b.probe == Probe::Admissibility;
  CHECK(boundary);
}

TEST_CASE("HH curve traced from the Gamma = 0 axis")
{
  auto seed = seed_point(0.0, -oracle::z3, BifKind::HH);
  CHECK(seed.M_crit.real() < 0);
  const auto c = trace_curve(seed, -1);
  REQUIRE(c.points.size() > 3);
  for (const auto &p : c.points)
    CHECK(std::abs(curve_function(BifKind::HH, p.gamma, p.z)) < 1e-6);
  CHECK_FALSE(c.stop_reason.empty());
  CHECK_THROWS_AS(trace_curve(seed, 0), DomainError);
}

TEST_CASE("limit constants reproduce the reference digits")
{
  const auto cs = limit_endpoints();
  REQUIRE(cs.size() >= 5);
  for (const auto &c : cs)
    CHECK_MESSAGE(c.error <= c.tolerance, c.name);
}

TEST_CASE("curve CSV write failure")
{
  BifurcationCurve c;
  CHECK_THROWS_AS(c.write_csv("/nonexistent-dir/x.csv"), IOError);
  const auto path = std::filesystem::temp_directory_path() / "cts_curve_test.csv";
  c.points.push_back(BifurcationPoint{});
  c.write_csv(path.string());
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
}
