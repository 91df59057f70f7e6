#include "cts/scan.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace cts;
namespace fs = std::filesystem;

namespace
{
GridSpec small(double g0, double g1, int ng, double z0, double z1, int nz)
{
  GridSpec s;
  s.gamma_min = g0;
  s.gamma_max = g1;
  s.n_gamma = ng;
  s.z_min = z0;
  s.z_max = z1;
  s.n_z = nz;
  return s;
}

fs::path tmp(const std::string &name) { return fs::temp_directory_path() / ("cts_scan_" + name); }
} // namespace

TEST_CASE("grid spec JSON round trip and validation")
{
  auto s = small(0, 2, 7, -1, 1, 5);
  s.gamma_mode = GammaAxisMode::Normalized;
  s.gamma_max = 0.9;
  const auto t = GridSpec::from_json(s.to_json());
  CHECK(t.n_gamma == 7);
  CHECK(t.gamma_mode == GammaAxisMode::Normalized);
  CHECK(t.gamma_at(0) == doctest::Approx(s.gamma_at(0)));
  CHECK_THROWS_AS(GridSpec::from_json("{}"), DomainError);
  auto bad = small(1, 0, 2, -1, 1, 2);
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(GridSpec::load("/nonexistent/grid.json"), IOError);
}

TEST_CASE("a small northern grid is all E6")
{
  // Just above the equator the spectrum is entirely real negative.
  const auto map = run_scan(small(0.08, 0.12, 2, 0.02, 0.03, 2), 1);
  for (const auto &c : map.cells)
    CHECK(c.color() == CellColor::E6);
}

TEST_CASE("forbidden cells render in the forbidden colour")
{
  const auto map = run_scan(small(1.9, 2.0, 2, -0.51, -0.49, 2), 1);
  REQUIRE(map.cells.size() == 4);
  for (const auto &c : map.cells)
  {
    CHECK(c.forbidden);
    CHECK(c.color() == CellColor::Forbidden);
  }
  const auto p = tmp("one.ppm");
  render_ppm(map, p.string());
  std::ifstream is(p, std::ios::binary);
  std::string magic;
  int w, h, maxv;
  is >> magic >> w >> h >> maxv;
  is.get();
  unsigned char px[3];
  is.read(reinterpret_cast<char *>(px), 3);
  CHECK(magic == "P6");
  CHECK(w == 2);
  CHECK(h == 2);
  const auto c = rgb(CellColor::Forbidden);
  CHECK(px[0] == c[0]);
  CHECK(px[1] == c[1]);
  CHECK(px[2] == c[2]);
  fs::remove(p);
}

TEST_CASE("CSV export round trip")
{
  const auto map = run_scan(small(0, 2, 6, -0.9, 0.9, 5), 1);
  const auto p = tmp("grid.csv");
  export_grid(map, p.string());
  const auto rows = read_grid(p.string());
  REQUIRE(rows.size() == 30);
  for (std::size_t k = 0; k < rows.size(); ++k)
  {
    const int i = int(k) / 5, j = int(k) % 5;
    CHECK(rows[k].gamma == map.spec.gamma_at(i));
    CHECK(rows[k].z == map.spec.z_at(j));
    CHECK(rows[k].cls == to_string(map.at(i, j).color()));
    CHECK(rows[k].roots[0] == map.at(i, j).roots[0]);
  }
  fs::remove(p);
}

TEST_CASE("scan output does not depend on the thread count")
{
  const auto spec = small(0, 2, 13, -1, 1, 11);
  const auto a = run_scan(spec, 1), b = run_scan(spec, 3);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t k = 0; k < a.cells.size(); ++k)
  {
    CHECK(a.cells[k].color() == b.cells[k].color());
    CHECK(a.cells[k].roots == b.cells[k].roots);
  }
}

TEST_CASE("components of a two-colour map")
{
  RegionMap m;
  m.spec = small(0, 1, 3, -1, 1, 3);
  m.cells.resize(9);
  for (auto &c : m.cells)
    c.code = ClassCode::E6;
  m.at(1, 1).forbidden = true;
  m.at(2, 2).forbidden = true;
  const auto comps = label_components(m);
  int e6 = 0, forb = 0;
  for (const auto &c : comps)
  {
    e6 += c.color == CellColor::E6;
    forb += c.color == CellColor::Forbidden;
  }
  CHECK(e6 == 1);
  CHECK(forb == 2);
}

TEST_CASE("sidecar records the command")
{
  const auto p = tmp("side.ppm");
  write_sidecar(p.string(), small(0, 1, 2, -1, 1, 2), "cts scan --grid g.json");
  std::ifstream is(p.string() + ".json");
  std::stringstream ss;
  ss << is.rdbuf();
  CHECK(ss.str().find("cts scan --grid g.json") != std::string::npos);
  CHECK(ss.str().find(kVersion) != std::string::npos);
  fs::remove(p.string() + ".json");
}

TEST_CASE("thread resolution")
{
  CHECK(resolve_threads(3) == 3);
  CHECK(resolve_threads(0) >= 1);
}
