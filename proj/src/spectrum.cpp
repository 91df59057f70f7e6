#include "cts/spectrum.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Eigenvalues>
#include <json.hpp>

#include <algorithm>
#include <cmath>

namespace cts
{

std::string SpectralClass::code() const
{
  std::string s;
  if (e)
    s += "E" + std::to_string(e);
  if (h)
    s += "H" + std::to_string(h);
  if (cs)
    s += "CS" + std::to_string(cs);
  return s;
}

std::string to_string(ClassCode c)
{
  switch (c)
  {
  case ClassCode::E6:
    return "E6";
  case ClassCode::E4CS1:
    return "E4CS1";
  case ClassCode::E2CS2:
    return "E2CS2";
  case ClassCode::E5H1:
    return "E5H1";
  case ClassCode::E3H1CS1:
    return "E3H1CS1";
  default:
    return "OTHER";
  }
}

ClassCode class_code(const SpectralClass &c)
{
  const std::string s = c.code();
  if (s == "E6")
    return ClassCode::E6;
  if (s == "E4CS1")
    return ClassCode::E4CS1;
  if (s == "E2CS2")
    return ClassCode::E2CS2;
  if (s == "E5H1")
    return ClassCode::E5H1;
  if (s == "E3H1CS1")
    return ClassCode::E3H1CS1;
  return ClassCode::Other;
}

namespace
{

using Cd = std::complex<double>;

double relative_residual(const Poly<double> &p, Cd x)
{
  Cd v = horner(p, x);
  double mag = 0.0, xp = 1.0;
  for (double c : p)
  {
    mag += std::abs(c) * xp;
    xp *= std::abs(x);
  }
  return mag > 0 ? std::abs(v) / mag : 0.0;
}

Cd newton_extended(const Poly<double> &p, Cd x)
{
  using CE = Complex<Extended>;
  Poly<Extended> pe(p.begin(), p.end());
  const auto dp = derivative(pe);
  const CE xe(Extended(x.real()), Extended(x.imag()));
  const CE f = horner(pe, xe);
  const CE d = horner(dp, xe);
  if (d == CE(0))
    return x;
  const CE xn = xe - f / d;
  const Cd cand(to_double(xn.real()), to_double(xn.imag()));
  if (!std::isfinite(cand.real()) || !std::isfinite(cand.imag()))
    return x;
  return relative_residual(p, cand) <= relative_residual(p, x) ? cand : x;
}

} // namespace

SpectrumReport classify_roots(const Poly<double> &monic, std::array<Cd, 6> roots,
                              const ClassifyOptions &opt)
{
  SpectrumReport rep;
  // Conjugate closure: real roots stay real, each upper root owns its mirror.
  std::vector<Cd> real, upper;
  for (const auto &r : roots)
  {
    if (r.imag() == 0.0)
      real.push_back(r);
    else if (r.imag() > 0.0)
      upper.push_back(r);
  }
  if (real.size() + 2 * upper.size() != 6)
  {
    // Unpaired complex roots: fall back to pairing by imaginary sign.
    real.clear();
    upper.clear();
    std::array<Cd, 6> s = roots;
    std::sort(s.begin(), s.end(), [](Cd a, Cd b) { return a.imag() > b.imag(); });
    for (int i = 0; i < 3; ++i)
      upper.push_back(Cd(0.5 * (s[i].real() + s[5 - i].real()), 0.5 * (s[i].imag() - s[5 - i].imag())));
  }
  std::sort(real.begin(), real.end(), [](Cd a, Cd b) { return a.real() < b.real(); });
  std::sort(upper.begin(), upper.end(), [](Cd a, Cd b) { return a.real() < b.real(); });

  int k = 0;
  for (const auto &r : real)
    rep.roots[k++] = r;
  for (const auto &u : upper)
  {
    rep.roots[k++] = u;
    rep.roots[k++] = std::conj(u);
  }

  double scale = 0.0;
  for (const auto &r : rep.roots)
    scale = std::max(scale, std::abs(r));
  const double tz = opt.tau_zero * scale;
  const double tc = opt.tau_cluster * scale;

  for (const auto &r : real)
  {
    if (r.real() < -tz)
      ++rep.cls.e;
    else if (r.real() > tz)
      ++rep.cls.h;
    else
      rep.degenerate = true;
  }
  rep.cls.cs = int(upper.size());
  for (std::size_t i = 0; i + 1 < real.size(); ++i)
    if (real[i + 1].real() - real[i].real() < tc)
      rep.degenerate = true;
  for (const auto &u : upper)
  {
    if (2.0 * u.imag() < tc)
      rep.degenerate = true;
    if (std::abs(u) < tz)
      rep.degenerate = true;
  }
  for (std::size_t i = 0; i < upper.size(); ++i)
    for (std::size_t j = i + 1; j < upper.size(); ++j)
      if (std::abs(upper[i] - upper[j]) < tc)
        rep.degenerate = true;

  rep.code = rep.degenerate ? ClassCode::Other : class_code(rep.cls);
  rep.residual = 0.0;
  for (int i = 0; i < 6; ++i)
  {
    rep.residuals[i] = relative_residual(monic, rep.roots[i]);
    rep.residual = std::max(rep.residual, rep.residuals[i]);
  }
  return rep;
}

SpectrumReport classify(const Poly<double> &monic, const ClassifyOptions &opt)
{
  if (monic.size() != 7)
    throw NumericalError("classification expects a degree-6 polynomial");
  const auto seeds = companion_roots(monic);
  std::array<Cd, 6> roots{};
  for (int i = 0; i < 6; ++i)
  {
    Cd r = newton_extended(monic, seeds[i]);
    // Newton in complex arithmetic must not push a real root off the axis.
    if (seeds[i].imag() == 0.0)
      r = Cd(r.real(), 0.0);
    roots[i] = r;
  }
  return classify_roots(monic, roots, opt);
}

double pencil_eigen_mismatch(const JacobianBlocks &jb, const std::array<Cd, 6> &roots)
{
  // Eigenvalues of Df in extended precision: the zero eigenvalue carries a
  // Jordan block that a double-precision solver resolves only to ~1e-8.
  using ME = Eigen::Matrix<Extended, 16, 16>;
  const auto cfg = MassConfigT<Extended>{Extended(jb.m), Extended(jb.m1)};
  const auto je = assemble_blocks(cfg, Extended(jb.z));
  const auto A = je.A();
  const auto B = je.Bmat();
  ME J = ME::Zero();
  for (int i = 0; i < 8; ++i)
  {
    J(i, 8 + i) = Extended(1);
    for (int j = 0; j < 8; ++j)
    {
      J(8 + i, j) = A[i * 8 + j];
      J(8 + i, 8 + j) = B[i * 8 + j];
    }
  }
  Eigen::EigenSolver<ME> es(J, false);
  std::vector<Cd> got(16);
  for (int i = 0; i < 16; ++i)
    got[i] = Cd(to_double(es.eigenvalues()[i].real()), to_double(es.eigenvalues()[i].imag()));

  std::vector<Cd> want = {0.0, 0.0, Cd(0, jb.Omega), Cd(0, -jb.Omega)};
  for (const auto &M : roots)
  {
    const Cd zeta = jb.Omega * std::sqrt(M);
    want.push_back(zeta);
    want.push_back(-zeta);
  }
  // Greedy matching on globally sorted distances.
  struct Pair
  {
    double d;
    int i, j;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      pairs.push_back({std::abs(want[i] - got[j]), i, j});
  std::sort(pairs.begin(), pairs.end(), [](const Pair &a, const Pair &b) { return a.d < b.d; });
  std::array<bool, 16> ui{}, uj{};
  double worst = 0.0;
  int matched = 0;
  for (const auto &p : pairs)
  {
    if (ui[p.i] || uj[p.j])
      continue;
    ui[p.i] = uj[p.j] = true;
    worst = std::max(worst, p.d);
    if (++matched == 16)
      break;
  }
  return worst;
}

namespace
{

template <class T>
SpectrumReport classify_multi(const Poly<T> &monic_t, const ClassifyOptions &opt)
{
  Poly<double> monic(monic_t.size());
  for (std::size_t k = 0; k < monic.size(); ++k)
    monic[k] = to_double(monic_t[k]);
  const auto r = poly_roots(monic_t);
  std::array<Cd, 6> roots{};
  for (int i = 0; i < 6; ++i)
    roots[i] = Cd(to_double(r[i].real()), to_double(r[i].imag()));
  // Aberth keeps real roots only approximately real; snap those whose
  // imaginary part is at the working-precision noise level.
  for (auto &x : roots)
    if (std::abs(x.imag()) < 1e-30 * std::max(1.0, std::abs(x)))
      x = Cd(x.real(), 0.0);
  return classify_roots(monic, roots, opt);
}

} // namespace

SpectrumReport classify_monic(const Poly<double> &monic, const ClassifyOptions &opt)
{
  return classify(monic, opt);
}

SpectrumReport classify_monic(const Poly<Extended> &monic, const ClassifyOptions &opt)
{
  return classify_multi(monic, opt);
}

SpectrumReport classify_monic(const Poly<Wide> &monic, const ClassifyOptions &opt)
{
  return classify_multi(monic, opt);
}

namespace
{

template <class T>
SpectrumReport spectrum_in(const MassConfig &masses, double z, const SpectrumOptions &opt)
{
  const auto cfg = masses.as<T>();
  const auto jb = assemble_blocks(cfg, T(z));
  const auto pen = pencil_poly(jb);
  const auto def = deflate(pen, T(z));
  SpectrumReport rep = classify_monic(def.monic, opt.classify);
  rep.remainder_M = to_double(def.remainder_M);
  rep.remainder_M1 = to_double(def.remainder_M1);
  rep.omega_sq = to_double(jb.omega_sq);
  return rep;
}

} // namespace

SpectrumReport spectrum_at(const MassConfig &masses, double z, const SpectrumOptions &opt)
{
  const auto ds = derived_scalars(masses, z);
  if (!ds.admissible())
    throw AdmissibilityError("point is not admissible: Omega^2 <= 0");
  SpectrumReport rep;
  switch (opt.precision)
  {
  case Precision::Double:
    rep = spectrum_in<double>(masses, z, opt);
    break;
  case Precision::Extended:
    rep = spectrum_in<Extended>(masses, z, opt);
    break;
  case Precision::Wide:
    rep = spectrum_in<Wide>(masses, z, opt);
    break;
  }
  rep.gamma = masses.gamma();
  rep.z = z;
  if (opt.verify)
    rep.verify_error = pencil_eigen_mismatch(assemble_blocks(masses, z), rep.roots);
  return rep;
}

std::string SpectrumReport::to_json() const
{
  nlohmann::ordered_json j;
  j["gamma"] = gamma;
  j["z"] = z;
  j["omega_sq"] = omega_sq;
  j["roots"] = nlohmann::json::array();
  for (const auto &r : roots)
    j["roots"].push_back({{"re", r.real()}, {"im", r.imag()}});
  j["class"] = to_string(code);
  j["counts"] = cls.code();
  j["degenerate"] = degenerate;
  j["residual"] = residual;
  if (verify_error >= 0)
    j["verify_error"] = verify_error;
  return j.dump(2);
}

} // namespace cts
