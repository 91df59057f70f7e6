#include "cts/linearization.hpp"

#include "cts/dynamics.hpp"

#include <json.hpp>

#include <cmath>

namespace cts
{

Mat16 full_jacobian(const JacobianBlocks &blocks)
{
  Mat16 J = Mat16::Zero();
  J.block<8, 8>(0, 8).setIdentity();
  const auto A = blocks.A();
  const auto B = blocks.Bmat();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
    {
      J(8 + i, j) = A[i * 8 + j];
      J(8 + i, 8 + j) = B[i * 8 + j];
    }
  return J;
}

namespace
{

using Vec16 = Eigen::Matrix<double, 16, 1>;

RotatingState from_vector(const Vec16 &x)
{
  RotatingState s;
  for (int i = 0; i < kBodies; ++i)
  {
    s.xi[i] = x[2 * i];
    s.eta[i] = x[2 * i + 1];
    s.xi_p[i] = x[8 + 2 * i];
    s.eta_p[i] = x[8 + 2 * i + 1];
  }
  return s;
}

Vec16 field(const Vec16 &x, const MassConfig &masses, const DerivedScalars &ds)
{
  const auto s = from_vector(x);
  const auto a = rotating_field(s, masses, ds);
  Vec16 out;
  for (int i = 0; i < 8; ++i)
    out[i] = x[8 + i];
  for (int i = 0; i < kBodies; ++i)
  {
    out[8 + 2 * i] = a.xi_pp[i];
    out[8 + 2 * i + 1] = a.eta_pp[i];
  }
  return out;
}

Mat16 central(const Vec16 &x0, double h, const MassConfig &masses, const DerivedScalars &ds)
{
  Mat16 J;
  for (int j = 0; j < 16; ++j)
  {
    Vec16 xp = x0, xm = x0;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (field(xp, masses, ds) - field(xm, masses, ds)) / (2.0 * h);
  }
  return J;
}

} // namespace

Mat16 fd_jacobian(const MassConfig &masses, double z, double step)
{
  if (!(step >= 1e-8 && step <= 1e-4))
    throw DomainError("finite-difference step must lie in [1e-8, 1e-4]");
  const auto eq = make_equilibrium(masses, z);
  Vec16 x0 = Vec16::Zero();
  for (int i = 0; i < kBodies; ++i)
  {
    x0[2 * i] = eq.rotating.xi[i];
    x0[2 * i + 1] = eq.rotating.eta[i];
  }
  const Mat16 coarse = central(x0, step, masses, eq.scalars);
  const Mat16 fine = central(x0, step / 2.0, masses, eq.scalars);
  return (4.0 * fine - coarse) / 3.0;
}

std::string blocks_json(const JacobianBlocks &b)
{
  nlohmann::ordered_json j;
  auto put = [&](const std::string &name, const Block2 &blk) {
    j[name] = {{blk(0, 0), blk(0, 1)}, {blk(1, 0), blk(1, 1)}};
  };
  for (int k = 0; k < 4; ++k)
    put("B" + std::to_string(k + 1), b.B[k]);
  for (int k = 0; k < 4; ++k)
    put("F" + std::to_string(k + 1), b.F[k]);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      put("C" + std::to_string(r + 1) + std::to_string(c + 1), b.C[r][c]);
  j["Omega"] = b.Omega;
  j["X"] = b.X;
  return j.dump(2);
}

double jacobian_relative_error(const Mat16 &analytic, const Mat16 &other, double floor)
{
  const double scale = floor * analytic.cwiseAbs().maxCoeff();
  double worst = 0.0;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
    {
      const double den = std::max(std::abs(analytic(i, j)), scale);
      worst = std::max(worst, std::abs(analytic(i, j) - other(i, j)) / den);
    }
  return worst;
}

} // namespace cts
