#include "cts/bifurcation.hpp"

#include "cts/limits.hpp"
#include "cts/solve.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace cts
{

std::string to_string(BifKind k)
{
  switch (k)
  {
  case BifKind::HH:
    return "HH";
  case BifKind::EH:
    return "EH";
  case BifKind::Boundary:
    return "Boundary";
  case BifKind::DoubleNoBif:
    return "DoubleNoBif";
  }
  return "?";
}

std::string to_string(Probe p)
{
  switch (p)
  {
  case Probe::Admissibility:
    return "admissibility";
  case Probe::P0:
    return "p0";
  case Probe::Disc:
    return "discriminant";
  case Probe::FactorResultant:
    return "factor_resultant";
  case Probe::Class:
    return "class";
  }
  return "?";
}

namespace
{

using Cd = std::complex<double>;

template <class T>
Poly<T> monic_at(const T &gamma, const T &z)
{
  const auto jb = assemble_blocks_raw(MassConfigT<T>{T(1), gamma}, z);
  return deflate(pencil_poly(jb), z).monic;
}

template <class T>
std::string digits(const T &x, int n = 30)
{
  std::ostringstream os;
  os << std::setprecision(n) << x;
  return os.str();
}

template <class T>
T probe_value(Probe p, const T &gamma, const T &z)
{
  switch (p)
  {
  case Probe::Admissibility:
    return derived_scalars(MassConfigT<T>{T(1), gamma}, z).omega_sq;
  case Probe::P0:
    return monic_at(gamma, z)[0];
  case Probe::Disc:
    return discriminant(monic_at(gamma, z));
  case Probe::FactorResultant:
    return qs_resultant(z * z);
  case Probe::Class:
    break;
  }
  throw NumericalError("probe_value: class probe has no scalar value");
}

int sgn(double x) { return (x > 0) - (x < 0); }

struct Sample
{
  bool admissible = false;
  std::string code;
  int p0 = 0;
  int disc = 0;
  int factor = 0;
};

template <class T>
Sample sample_in(double gamma, double z, bool factor)
{
  Sample s;
  const auto ds = derived_scalars(MassConfig{1.0, gamma}, z);
  s.admissible = ds.admissible();
  if (!s.admissible)
  {
    s.code = "FORBIDDEN";
    return s;
  }
  const Poly<T> p = monic_at(T(gamma), T(z));
  ClassifyOptions opt;
  if constexpr (std::is_same_v<T, Extended>)
    opt = {1e-25, 1e-20};
  else if constexpr (std::is_same_v<T, Wide>)
    opt = {1e-50, 1e-45};
  const auto rep = classify_monic(p, opt);
  s.code = to_string(rep.code);
  s.p0 = sgn(to_double(p[0]));
  s.disc = sgn(to_double(discriminant(p)));
  if (factor)
    s.factor = sgn(to_double(qs_resultant(T(z) * T(z))));
  return s;
}

Sample sample(double gamma, double z, Precision prec, bool factor)
{
  switch (prec)
  {
  case Precision::Extended:
    return sample_in<Extended>(gamma, z, factor);
  case Precision::Wide:
    return sample_in<Wide>(gamma, z, factor);
  default:
    return sample_in<double>(gamma, z, factor);
  }
}

struct Detector
{
  PathSegment path;
  Precision prec;
  bool factor;
  std::vector<Bracket> out;

  Sample at(double t) const
  {
    const auto [g, z] = path.at(t);
    return sample(g, z, prec, factor);
  }

  void examine(double t0, const Sample &s0, double t1, const Sample &s1, int depth)
  {
    const bool adm = s0.admissible != s1.admissible;
    const bool cls = s0.code != s1.code;
    if (adm)
    {
      push(t0, s0, t1, s1, Probe::Admissibility, false);
      return;
    }
    if (!s0.admissible)
      return;
    const bool p0 = s0.p0 != s1.p0;
    const bool dc = s0.disc != s1.disc;
    const bool fc = factor && s0.factor != s1.factor;
    const int events = int(p0) + int(dc) + int(fc);
    if (events == 0 && !cls)
      return;
    if (events > 1 && depth < 40)
    {
      const double tm = 0.5 * (t0 + t1);
      const Sample sm = at(tm);
      examine(t0, s0, tm, sm, depth + 1);
      examine(tm, sm, t1, s1, depth + 1);
      return;
    }
    Probe probe = Probe::Class;
    if (fc)
      probe = Probe::FactorResultant;
    else if (p0)
      probe = Probe::P0;
    else if (dc)
      probe = Probe::Disc;
    push(t0, s0, t1, s1, probe, p0 && dc);
  }

  void push(double t0, const Sample &s0, double t1, const Sample &s1, Probe probe, bool ambiguous)
  {
    Bracket b;
    b.path = path;
    b.t0 = t0;
    b.t1 = t1;
    b.left = s0.code;
    b.right = s1.code;
    b.probe = probe;
    b.ambiguous = ambiguous;
    out.push_back(b);
  }
};

struct Counts
{
  int e = 0, h = 0, cs = 0;
  bool valid = false;
};

Counts parse_code(const std::string &code)
{
  Counts c;
  if (code == "OTHER" || code == "FORBIDDEN" || code.empty())
    return c;
  std::size_t i = 0;
  while (i < code.size())
  {
    std::string key;
    while (i < code.size() && std::isalpha(static_cast<unsigned char>(code[i])))
      key += code[i++];
    int v = 0;
    while (i < code.size() && std::isdigit(static_cast<unsigned char>(code[i])))
      v = 10 * v + (code[i++] - '0');
    if (key == "E")
      c.e = v;
    else if (key == "H")
      c.h = v;
    else if (key == "CS")
      c.cs = v;
  }
  c.valid = true;
  return c;
}

template <class T>
std::vector<Complex<T>> roots_of(const Poly<T> &p)
{
  return poly_roots(p);
}

/// Closest pair of roots, returned as their midpoint.
template <class T>
Complex<T> closest_pair_mid(const std::vector<Complex<T>> &r)
{
  using std::abs;
  T best = T(std::numeric_limits<double>::max());
  Complex<T> mid(0);
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = i + 1; j < r.size(); ++j)
    {
      const T d = abs(r[i] - r[j]);
      if (d < best)
      {
        best = d;
        mid = (r[i] + r[j]) / T(2);
      }
    }
  return mid;
}

template <class T>
Complex<T> nearest_to_zero(const std::vector<Complex<T>> &r)
{
  using std::abs;
  Complex<T> best = r.front();
  for (const auto &x : r)
    if (abs(x) < abs(best))
      best = x;
  return best;
}

template <class T>
T poly_scale(const Poly<T> &p, const T &x)
{
  using std::abs;
  T s = T(0), xp = T(1);
  for (const auto &c : p)
  {
    s += abs(c) * xp;
    xp *= abs(x);
  }
  return s;
}

Poly<Extended> trim(Poly<Extended> p)
{
  while (p.size() > 1 && p.back() == 0)
    p.pop_back();
  return p;
}

/// Splitting test at a root M* of multiplicity `order` (1 or 2) of p at
/// (gamma, z), extended precision. Derivatives of p(M*) are divided by
/// p^(order)(M*)/order!, so they measure the motion of the root (order 1) or
/// of the squared half-gap of the pair (order 2).
void splitting_test(BifurcationPoint &pt, const Extended &gamma, const Extended &z, const Extended &Mstar,
                int order, double tol)
{
  using E = Extended;
  const Poly<E> p = monic_at(gamma, z);
  const E hg = E(1e-12) * (1 + gamma);
  const E hz = E(1e-12);
  Poly<E> pg(p.size()), pz(p.size());
  {
    Poly<E> a, b, c;
    if (gamma > 2 * hg)
    {
      a = monic_at(gamma + hg, z);
      b = monic_at(gamma - hg, z);
      for (std::size_t k = 0; k < p.size(); ++k)
        pg[k] = (a[k] - b[k]) / (2 * hg);
    }
    else
    {
      a = monic_at(gamma + hg, z);
      b = monic_at(gamma + 2 * hg, z);
      for (std::size_t k = 0; k < p.size(); ++k)
        pg[k] = (-3 * p[k] + 4 * a[k] - b[k]) / (2 * hg);
    }
    a = monic_at(gamma, z + hz);
    b = monic_at(gamma, z - hz);
    for (std::size_t k = 0; k < p.size(); ++k)
      pz[k] = (a[k] - b[k]) / (2 * hz);
  }
  const auto d1 = derivative(p);
  const E scale = order == 1 ? horner(d1, Mstar) : horner(derivative(d1), Mstar) / 2;
  if (scale == 0)
    throw AmbiguousKind("root of higher multiplicity than expected");
  pt.f_gamma = to_double(horner(pg, Mstar) / scale);
  pt.f_z = to_double(horner(pz, Mstar) / scale);
  const Poly<E> pm = trim(derivative(p));
  const Poly<E> pgt = trim(pg);
  if (pgt.size() >= 2)
  {
    const E r = resultant(pm, pgt);
    const int dm = int(pm.size()) - 1, dg = int(pgt.size()) - 1;
    using std::pow;
    const E norm = pow(max_abs(pm), dg) * pow(max_abs(pgt), dm);
    pt.res3 = to_double(r / norm);
  }
  // Rates in (Gamma/(1+Gamma), z), measured against the squared local root
  // spacing: min(|M*|, distance to the nearest root outside the pair).
  const double fu = std::abs(pt.f_gamma) * std::pow(1.0 + to_double(gamma), 2);
  double unit = 1.0;
  if (order == 2)
  {
    auto r = poly_roots(p);
    std::sort(r.begin(), r.end(), [&](const auto &a, const auto &b) { return abs(a - Mstar) < abs(b - Mstar); });
    const double m = std::max(std::min(std::abs(to_double(Mstar)), to_double(abs(r[2] - Mstar))), 1e-30);
    unit = m * m;
  }
  pt.transversal = std::max(fu, std::abs(pt.f_z)) / unit > tol;
}

template <class T>
T locate(const Bracket &b, Probe probe)
{
  const T g0 = T(b.path.gamma0), g1 = T(b.path.gamma1), z0 = T(b.path.z0), z1 = T(b.path.z1);
  auto f = [&](const T &t) { return probe_value(probe, g0 + t * (g1 - g0), z0 + t * (z1 - z0)); };
  const int bits = std::is_same_v<T, double> ? 50 : 110;
  return solve_bracketed<T>(f, T(b.t0), T(b.t1), bits);
}

double locate_class(const Bracket &b)
{
  double a = b.t0, c = b.t1;
  for (int it = 0; it < 60 && c - a > 1e-15; ++it)
  {
    const double m = 0.5 * (a + c);
    const auto [g, z] = b.path.at(m);
    const Sample s = sample(g, z, Precision::Double, false);
    if (s.code == b.left)
      a = m;
    else
      c = m;
  }
  return 0.5 * (a + c);
}

} // namespace

std::vector<Bracket> detect_transitions(const PathSegment &path, int n_samples, Precision precision)
{
  if (n_samples < 1)
    throw DomainError("detect_transitions: n_samples must be positive");
  Detector d{path, precision, path.on_gamma_zero() && path.z0 < 0 && path.z1 < 0, {}};
  std::vector<Sample> s(n_samples + 1);
  for (int i = 0; i <= n_samples; ++i)
    s[i] = d.at(double(i) / n_samples);
  for (int i = 0; i < n_samples; ++i)
    d.examine(double(i) / n_samples, s[i], double(i + 1) / n_samples, s[i + 1], 0);

  // A degenerate sample sitting on an event splits it in two; merge them.
  std::vector<Bracket> merged;
  for (const auto &b : d.out)
  {
    if (!merged.empty())
    {
      auto &prev = merged.back();
      if (prev.right == "OTHER" && b.left == "OTHER" && prev.t1 == b.t0 &&
          (prev.probe == Probe::Class || b.probe == Probe::Class))
      {
        prev.t1 = b.t1;
        prev.right = b.right;
        if (prev.probe == Probe::Class)
          prev.probe = b.probe;
        continue;
      }
    }
    merged.push_back(b);
  }
  return merged;
}

BifurcationPoint refine_point(const Bracket &b, std::optional<BifKind> hint, const RefineOptions &opt)
{
  if (b.ambiguous)
    throw AmbiguousKind("p(0) and the discriminant both change sign inside the bracket");
  using E = Extended;
  BifurcationPoint pt;
  pt.left = b.left;
  pt.right = b.right;

  Probe probe = b.probe;
  if (probe == Probe::Class)
  {
    const Counts l = parse_code(b.left), r = parse_code(b.right);
    if (l.valid && r.valid && std::abs(l.e - r.e) == 2 && std::abs(l.cs - r.cs) == 1)
      probe = Probe::Disc;
    else if (l.valid && r.valid && std::abs(l.e - r.e) == 1 && std::abs(l.h - r.h) == 1)
      probe = Probe::P0;
  }

  E t;
  if (probe == Probe::Class)
  {
    if (!hint)
      throw AmbiguousKind("class change without a sign-changing probe: " + b.left + " -> " + b.right);
    t = E(locate_class(b));
  }
  else if (opt.precision == Precision::Double)
    t = E(locate<double>(b, probe));
  else
    t = locate<E>(b, probe);

  const E gamma = E(b.path.gamma0) + t * (E(b.path.gamma1) - E(b.path.gamma0));
  const E z = E(b.path.z0) + t * (E(b.path.z1) - E(b.path.z0));
  pt.t = to_double(t);
  pt.gamma = to_double(gamma);
  pt.z = to_double(z);
  pt.gamma_digits = digits(gamma);
  pt.z_digits = digits(z);

  if (probe == Probe::Admissibility)
  {
    pt.kind = BifKind::Boundary;
    pt.M_crit = Cd(std::nan(""), std::nan(""));
    return pt;
  }

  const Poly<E> p = monic_at(gamma, z);
  const auto r = roots_of(p);
  if (probe == Probe::P0 || hint == BifKind::EH)
  {
    const auto m = nearest_to_zero(r);
    pt.kind = BifKind::EH;
    pt.M_crit = Cd(to_double(m.real()), to_double(m.imag()));
    splitting_test(pt, gamma, z, E(0), 1, opt.transversal_tol);
    return pt;
  }

  const auto mid = closest_pair_mid(r);
  pt.M_crit = Cd(to_double(mid.real()), 0.0);
  if (!(pt.M_crit.real() < 0))
    throw AmbiguousKind("double root is not negative");
  splitting_test(pt, gamma, z, mid.real(), 2, opt.transversal_tol);
  pt.kind = pt.transversal ? BifKind::HH : BifKind::DoubleNoBif;
  if (hint && *hint == BifKind::DoubleNoBif && pt.transversal)
    pt.kind = BifKind::HH;
  return pt;
}

double curve_function(BifKind kind, double gamma, double z)
{
  const Poly<double> p = monic_at(gamma, z);
  if (kind == BifKind::EH)
    return p[0];
  if (kind == BifKind::Boundary)
    return derived_scalars(MassConfig{1.0, gamma}, z).omega_sq;
  return discriminant(p);
}

namespace
{

using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

double gamma_of(double u) { return u / (1.0 - u); }

/// A curve as the zero set of n-1 equations in n unknowns. EH and Boundary
/// use (u, z); HH uses (u, z, M) with M the double root, which keeps the
/// curve smooth where its projection to (u, z) has a cusp.
struct CurveSystem
{
  BifKind kind;

  int dim() const { return kind == BifKind::HH ? 3 : 2; }

  /// Residual and its scale; for HH rows are p(M), p'(M) over sum |c_k| |M|^k.
  VecX raw(double u, double z, double M) const
  {
    const double gamma = gamma_of(u);
    if (kind == BifKind::Boundary)
      return VecX::Constant(1, derived_scalars_unchecked(MassConfig{1.0, gamma}, z).omega_sq);
    const auto p = monic_at(gamma, z);
    if (kind == BifKind::EH)
      return VecX::Constant(1, p[0]);
    const auto dp = derivative(p);
    VecX r(2);
    r << horner(p, M), horner(dp, M);
    return r;
  }

  double scale(const VecX &x) const
  {
    if (kind != BifKind::HH)
      return 1.0;
    const auto p = monic_at(gamma_of(x[0]), x[1]);
    double s = 0, mp = 1;
    for (double c : p)
    {
      s += std::abs(c) * mp;
      mp *= std::abs(x[2]);
    }
    return s;
  }

  VecX residual(const VecX &x, double s) const { return raw(x[0], x[1], dim() == 3 ? x[2] : 0.0) / s; }

  MatX jacobian(const VecX &x, double s) const
  {
    const int n = dim();
    const double M = n == 3 ? x[2] : 0.0;
    MatX J(n - 1, n);
    const double hu = 1e-6 * (1.0 - x[0]);
    const double hz = 1e-7 * std::max(1e-3, std::abs(x[1]));
    J.col(0) = (raw(x[0] + hu, x[1], M) - raw(x[0] - hu, x[1], M)) / (2 * hu * s);
    J.col(1) = (raw(x[0], x[1] + hz, M) - raw(x[0], x[1] - hz, M)) / (2 * hz * s);
    if (n == 3)
    {
      const auto p = monic_at(gamma_of(x[0]), x[1]);
      const auto d1 = derivative(p);
      const auto d2 = derivative(d1);
      J(0, 2) = horner(d1, M) / s;
      J(1, 2) = horner(d2, M) / s;
    }
    return J;
  }

  double second_derivative(const VecX &x) const
  {
    const auto p = monic_at(gamma_of(x[0]), x[1]);
    return horner(derivative(derivative(p)), x[2]);
  }
};

/// The corrector may step slightly below Gamma = 0 so that curves tangent
/// to that line pass through their touching point.
bool inside(BifKind kind, const VecX &x)
{
  if (!(x[0] > -0.05) || !(x[0] < 1) || !(std::abs(x[1]) < 1) || x[1] == 0)
    return false;
  if (kind == BifKind::Boundary)
    return true;
  return derived_scalars(MassConfig{1.0, std::max(0.0, gamma_of(x[0]))}, x[1]).admissible();
}

VecX tangent(const CurveSystem &sys, const VecX &x, const VecX &prev)
{
  const MatX J = sys.jacobian(x, sys.scale(x));
  VecX t(sys.dim());
  if (sys.dim() == 2)
    t << -J(0, 1), J(0, 0);
  else
  {
    const Eigen::Vector3d a = J.row(0).transpose(), b = J.row(1).transpose();
    t = a.cross(b);
  }
  const double n = t.norm();
  if (n == 0 || !std::isfinite(n))
    throw ContinuationStall("degenerate gradient on the curve");
  t /= n;
  if (prev.size() == t.size() && t.dot(prev) < 0)
    t = -t;
  return t;
}

/// Newton on {G = 0, t . (x - xp) = 0}.
bool correct(const CurveSystem &sys, const VecX &xp, const VecX &t, VecX &x, int &iters)
{
  const int n = sys.dim();
  x = xp;
  for (iters = 1; iters <= 12; ++iters)
  {
    if (!inside(sys.kind, x))
      return false;
    const double s = sys.scale(x);
    MatX A(n, n);
    A.topRows(n - 1) = sys.jacobian(x, s);
    A.row(n - 1) = t.transpose();
    VecX rhs(n);
    rhs.head(n - 1) = -sys.residual(x, s);
    rhs[n - 1] = -t.dot(x - xp);
    const VecX dx = A.fullPivLu().solve(rhs);
    if (!dx.allFinite())
      return false;
    x += dx;
    if (dx.norm() < 1e-10)
      return inside(sys.kind, x);
  }
  return false;
}

/// Newton with u pinned to 0 for the remaining unknowns.
bool land_on_zero(const CurveSystem &sys, VecX &x)
{
  const int n = sys.dim();
  x[0] = 0.0;
  for (int it = 0; it < 30; ++it)
  {
    const double s = sys.scale(x);
    const MatX J = sys.jacobian(x, s).rightCols(n - 1);
    const VecX dx = J.fullPivLu().solve(-sys.residual(x, s));
    if (!dx.allFinite())
      return false;
    x.tail(n - 1) += dx;
    if (dx.norm() < 1e-13)
      return true;
  }
  return false;
}

BifurcationPoint make_point(BifKind kind, const VecX &x)
{
  BifurcationPoint p;
  p.kind = kind;
  p.gamma = gamma_of(x[0]);
  p.z = x[1];
  if (kind == BifKind::HH)
    p.M_crit = Cd(x[2], 0.0);
  else if (kind == BifKind::EH)
    p.M_crit = nearest_to_zero(companion_roots(monic_at(p.gamma, p.z)));
  return p;
}

} // namespace

BifurcationPoint seed_point(double gamma, double z, BifKind kind)
{
  BifurcationPoint p;
  p.gamma = gamma;
  p.z = z;
  p.kind = kind;
  const auto r = companion_roots(monic_at(gamma, z));
  if (kind == BifKind::EH)
    p.M_crit = nearest_to_zero(r);
  else if (kind == BifKind::HH || kind == BifKind::DoubleNoBif)
  {
    double best = HUGE_VAL;
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = i + 1; j < r.size(); ++j)
        if (std::abs(r[i] - r[j]) < best)
        {
          best = std::abs(r[i] - r[j]);
          p.M_crit = Cd(0.5 * (r[i] + r[j]).real(), 0.0);
        }
  }
  return p;
}

BifurcationCurve trace_curve(const BifurcationPoint &seed, int direction, const StepControl &sc)
{
  if (direction != 1 && direction != -1)
    throw DomainError("trace_curve: direction must be +1 or -1");
  BifurcationCurve c;
  c.kind = seed.kind == BifKind::DoubleNoBif ? BifKind::HH : seed.kind;
  const BifKind kind = c.kind;
  const CurveSystem sys{kind};
  const int n = sys.dim();

  VecX x(n);
  x[0] = seed.gamma / (1.0 + seed.gamma);
  x[1] = seed.z;
  if (n == 3)
    x[2] = seed.M_crit.real();
  VecX t = tangent(sys, x, VecX());
  {
    VecX x0;
    int iters = 0;
    if (!correct(sys, x, t, x0, iters))
      throw ContinuationStall("seed is not on a curve of the requested kind");
    x = x0;
  }
  t = tangent(sys, x, t);
  if (direction < 0)
    t = -t;
  c.points.push_back(make_point(kind, x));

  double h = sc.h0;
  int failures = 0;
  while (int(c.points.size()) < sc.max_points)
  {
    const VecX xp = x + h * t;
    if (xp[0] > sc.u_max)
    {
      c.gammaInf_limit = x[1];
      c.stop_reason = "reached the large-ratio cutoff";
      return c;
    }
    if (std::abs(xp[1]) >= 1 || (xp[1] > 0) != (x[1] > 0))
    {
      c.stop_reason = xp[1] * x[1] <= 0 ? "reached z = 0" : "reached |z| = 1";
      return c;
    }
    VecX xn;
    int iters = 0;
    bool ok = false;
    try
    {
      ok = correct(sys, xp, t, xn, iters) && (xn - x).norm() < 2 * h;
    }
    catch (const Error &)
    {
      ok = false;
    }
    if (!ok)
    {
      if (!inside(kind, xp) && xp[0] >= 0)
      {
        c.stop_reason = "left the admissible region";
        return c;
      }
      h *= 0.5;
      if (++failures >= 3 && h < sc.h_min)
      {
        if (kind == BifKind::HH && std::abs(x[2]) < 1e-4)
        {
          c.stop_reason = "double root reached M = 0 at double-precision resolution";
          return c;
        }
        std::ostringstream os;
        os << "continuation stalled after " << c.points.size() << " points at Gamma = " << c.points.back().gamma
           << ", z = " << c.points.back().z;
        throw ContinuationStall(os.str());
      }
      h = std::max(h, sc.h_min * 0.5);
      continue;
    }
    failures = 0;
    if (xn[0] < 0)
    {
      // Transversal crossing of Gamma = 0 between x and xn.
      VecX xl = x + (x[0] / (x[0] - xn[0])) * (xn - x);
      c.gamma0_limit = land_on_zero(sys, xl) ? xl[1] : x[1] + (x[0] / (x[0] - xn[0])) * (xn[1] - x[1]);
      c.stop_reason = "reached Gamma = 0";
      return c;
    }
    if (kind == BifKind::HH)
    {
      if (!(xn[2] < 0))
      {
        c.stop_reason = "double root became nonnegative";
        return c;
      }
      if ((sys.second_derivative(x) > 0) != (sys.second_derivative(xn) > 0))
      {
        c.stop_reason = "triple root (cusp of the double-root locus)";
        return c;
      }
    }
    const VecX tn = tangent(sys, xn, t);
    if (t[0] < 0 && tn[0] >= 0 && xn[0] < 1e-3 && !c.gamma0_limit)
    {
      // Tangency with Gamma = 0: bisect on the sign of du/ds along the arc.
      double a = 0, b = (xn - x).norm(), zt = xn[1];
      for (int k = 0; k < 40 && b - a > 1e-13; ++k)
      {
        const double m = 0.5 * (a + b);
        VecX xm;
        int it = 0;
        if (!correct(sys, x + m * t, t, xm, it))
          break;
        zt = xm[1];
        (tangent(sys, xm, t)[0] < 0 ? a : b) = m;
      }
      c.gamma0_limit = zt;
    }
    c.points.push_back(make_point(kind, xn));
    t = tn;
    x = xn;
    if (iters <= 3)
      h = std::min(1.5 * h, sc.h_max);
  }
  c.stop_reason = "max_points";
  return c;
}

std::string BifurcationCurve::to_json() const
{
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  j["points"] = nlohmann::json::array();
  for (const auto &p : points)
    j["points"].push_back({{"gamma", p.gamma}, {"z", p.z}, {"M_crit", p.M_crit.real()}});
  nlohmann::ordered_json e;
  e["gamma0_limit"] = gamma0_limit ? nlohmann::json(*gamma0_limit) : nlohmann::json(nullptr);
  e["gammaInf_limit"] = gammaInf_limit ? nlohmann::json(*gammaInf_limit) : nlohmann::json(nullptr);
  j["endpoints"] = e;
  j["stop_reason"] = stop_reason;
  return j.dump(2);
}

void BifurcationCurve::write_csv(const std::string &path) const
{
  std::ofstream os(path);
  if (!os)
    throw IOError("cannot open " + path);
  os << std::setprecision(17) << "gamma,z,M_crit\n";
  for (const auto &p : points)
    os << p.gamma << ',' << p.z << ',' << p.M_crit.real() << '\n';
  if (!os)
    throw IOError("write failed: " + path);
}

double disc_gamma_derivative_at_zero(double z)
{
  using E = Extended;
  const E zz(z);
  auto f = [&](const E &g) { return discriminant(monic_at(g, zz)); };
  const E h = E(1e-12);
  const E f0 = f(E(0));
  auto one_sided = [&](const E &s) { return (-3 * f0 + 4 * f(s) - f(2 * s)) / (2 * s); };
  const E d1 = one_sided(h), d2 = one_sided(h / 2);
  return to_double((4 * d2 - d1) / 3);
}

namespace
{

LimitConstant make_constant(const std::string &name, const Extended &v, const std::string &reference)
{
  LimitConstant c;
  c.name = name;
  c.value = digits(v, 25);
  c.reference = reference;
  const auto dot = reference.find('.');
  const int decimals = dot == std::string::npos ? 0 : int(reference.size() - dot - 1);
  c.tolerance = 0.5 * std::pow(10.0, -decimals);
  c.error = to_double(abs(v - Extended(reference)));
  return c;
}

} // namespace

std::vector<LimitConstant> limit_endpoints()
{
  using E = Extended;
  std::vector<LimitConstant> out;
  const int bits = 140;

  // Double roots of the three-body cubic along Gamma = 0.
  {
    auto f = [](const E &z) { return q_discriminant(z); };
    std::vector<E> z;
    for (const auto &br : sign_changes<E>(f, E(-0.999), E(-0.001), 400))
      z.push_back(solve_bracketed<E>(f, br.first, br.second, bits));
    std::sort(z.begin(), z.end());
    const char *names[] = {"z1", "z2", "z3"};
    const char *pub[] = {"0.8299852976470169", "0.7318602978602651", "0.3702483631504248"};
    for (std::size_t i = 0; i < 3 && i < z.size(); ++i)
      out.push_back(make_constant(names[i], -z[i], pub[i]));
    if (z.size() != 3)
      throw ConvergenceError("expected three double roots of the three-body cubic");
  }

  // Common roots of Q and S; split into splitting and non-splitting by the
  // Gamma-derivative of the discriminant relative to its size nearby.
  {
    auto f = [](const E &Z) { return qs_resultant(Z); };
    std::vector<E> zs;
    for (const auto &br : sign_changes<E>(f, E(1e-6), E(0.999), 2000))
      zs.push_back(-sqrt(solve_bracketed<E>(f, br.first, br.second, bits)));
    std::sort(zs.begin(), zs.end());
    std::vector<E> split, nosplit;
    for (const auto &z : zs)
    {
      const double zd = to_double(z);
      const double d = std::abs(disc_gamma_derivative_at_zero(zd));
      double window = 0;
      for (int k = -10; k <= 10; ++k)
        if (k != 0)
          window = std::max(window, std::abs(disc_gamma_derivative_at_zero(zd + 0.001 * k)));
      (d < 1e-3 * window ? nosplit : split).push_back(z);
    }
    if (split.size() != 2 || nosplit.size() != 4)
      throw ConvergenceError("unexpected common-root pattern of Q and S");
    out.push_back(make_constant("z4", split[0], "-0.7389177458229170"));
    out.push_back(make_constant("z5", split[1], "-0.2839588732787964"));
    const char *pub[] = {"-0.736842605000", "-0.330240264422", "-0.114735617843", "-0.071519103755"};
    for (int i = 0; i < 4; ++i)
      out.push_back(make_constant("R1_" + std::to_string(i + 1), nosplit[i], pub[i]));
  }

  // Large-ratio limit: collisions among the roots of the limit quartic.
  {
    auto f = [](const E &z) { return discriminant(limit_quartic(z)); };
    std::vector<E> z;
    for (const auto &br : sign_changes<E>(f, E(0.005), E(0.995), 60))
      z.push_back(solve_bracketed<E>(f, br.first, br.second, bits));
    if (z.size() != 2)
      throw ConvergenceError("expected two collisions in the limit quartic");
    out.push_back(make_constant("z40", z[0], "0.036420258329089021"));
    // The pair leaving M = 0 collides where 1/4 - z^2 vanishes.
    out.push_back(make_constant("z50", E(1) / 2, "0.5"));
    out.push_back(make_constant("z60", z[1], "0.942152758989663983"));
  }

  {
    auto f = [](const E &z) {
      const E w = 1 + 3 * z * z;
      return z * z * w * w * w - E(256) / 27;
    };
    out.push_back(make_constant("z_exceptional", solve_bracketed<E>(f, E(-0.999), E(-0.1), bits), "-0.73176195875"));
  }
  return out;
}

} // namespace cts
