#include "cts/linearization.hpp"

#include <doctest.h>

using namespace cts;

TEST_CASE("analytic Jacobian matches finite differences")
{
  for (auto [g, z] : {std::pair{1.0, 0.5}, {0.3, -0.4}, {0.0, 0.7}, {1.9, 0.1}})
  {
    const auto jb = assemble_blocks(MassConfig{1.0, g}, z);
    const Mat16 a = full_jacobian(jb);
    const Mat16 fd = fd_jacobian(MassConfig{1.0, g}, z, 1e-4);
    CHECK(jacobian_relative_error(a, fd) < 1e-6);
  }
}

TEST_CASE("block symmetries")
{
  const auto jb = assemble_blocks_raw(MassConfig{1.0, 1.0}, 0.3);
  CHECK(jb.B[3] == s_d(jb.B[2]));
  CHECK(jb.F[3] == s_o(jb.F[2]));
  CHECK(jb.C[3][3] == s_o(jb.C[2][2]));
  CHECK(s_o(s_o(jb.C[2][3])) == jb.C[2][3]);
}

TEST_CASE("blocks export names every block")
{
  const auto s = blocks_json(assemble_blocks(MassConfig{1.0, 1.0}, 0.5));
  for (const char *k : {"\"B1\"", "\"F4\"", "\"C11\"", "\"C44\""})
    CHECK(s.find(k) != std::string::npos);
}

TEST_CASE("inadmissible point has no rotation rate")
{
  const auto jb = assemble_blocks_raw(MassConfig{1.0, 2.0}, -0.5);
  CHECK(jb.omega_sq < 0);
  CHECK(jb.Omega == 0.0);
}
