#pragma once

// Transitions of the spectral class in the (Gamma, z) plane: detection along
// segments, refinement, continuation of curves, and the table of limit
// constants.

#include "cts/spectrum.hpp"

#include <complex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cts
{

enum class BifKind
{
  HH,          ///< negative double root leaving the real axis
  EH,          ///< root crossing M = 0
  Boundary,    ///< Omega^2 = 0
  DoubleNoBif, ///< double root that does not split
};

std::string to_string(BifKind k);

/// Straight segment in (Gamma, z), parameterised by t in [0, 1].
struct PathSegment
{
  double gamma0 = 0, z0 = 0, gamma1 = 0, z1 = 0;

  std::pair<double, double> at(double t) const
  {
    return {gamma0 + t * (gamma1 - gamma0), z0 + t * (z1 - z0)};
  }
  bool on_gamma_zero() const { return gamma0 == 0.0 && gamma1 == 0.0; }
};

/// Which scalar changes sign across a bracket.
enum class Probe
{
  Admissibility,   ///< Omega^2
  P0,              ///< p(0)
  Disc,            ///< discriminant of p in M
  FactorResultant, ///< Res(Q, S) on the line Gamma = 0
  Class,           ///< class code only
};

std::string to_string(Probe p);

struct Bracket
{
  PathSegment path;
  double t0 = 0, t1 = 0;
  std::string left, right; ///< class codes, "FORBIDDEN" when inadmissible
  Probe probe = Probe::Class;
  bool ambiguous = false;  ///< p(0) and the discriminant both change sign
};

struct BifurcationPoint
{
  double gamma = 0, z = 0, t = 0;
  BifKind kind = BifKind::HH;
  std::complex<double> M_crit{0, 0};
  bool transversal = true;
  double f_gamma = 0; ///< d p(M*)/dGamma over p''(M*)/2 (HH) or p'(M*) (EH)
  double f_z = 0;     ///< d p(M*)/dz, same scale
  double res3 = 0;    ///< scaled Res(dp/dM, dp/dGamma)
  std::string left, right;
  std::string gamma_digits, z_digits; ///< extended-precision location
};

/// Sample class codes, p(0) and the discriminant along a segment. Brackets
/// with more than one event are bisected until they separate.
std::vector<Bracket> detect_transitions(const PathSegment &path, int n_samples,
                                        Precision precision = Precision::Double);

struct RefineOptions
{
  Precision precision = Precision::Extended;
  double transversal_tol = 1e-12;
};

/// Locate the event inside a bracket and test whether the double root splits.
/// Throws ConvergenceError, AmbiguousKind.
BifurcationPoint refine_point(const Bracket &bracket, std::optional<BifKind> kind_hint = std::nullopt,
                              const RefineOptions &opt = {});

struct BifurcationCurve
{
  BifKind kind = BifKind::HH;
  std::vector<BifurcationPoint> points;
  std::optional<double> gamma0_limit;   ///< z where the curve meets Gamma = 0
  std::optional<double> gammaInf_limit; ///< z as Gamma/(1+Gamma) -> 1
  std::string stop_reason;

  std::string to_json() const;
  void write_csv(const std::string &path) const;
};

struct StepControl
{
  double h0 = 1e-3;
  double h_min = 1e-5;
  double h_max = 1e-2;
  int max_points = 2000;
  double u_max = 1.0 - 1e-6; ///< stop once Gamma/(1+Gamma) exceeds this
};

/// Starting point for trace_curve at (Gamma, z): M_crit is the mean of the
/// closest root pair (HH) or the root nearest 0 (EH).
BifurcationPoint seed_point(double gamma, double z, BifKind kind);

/// Pseudo-arclength continuation of p(0) = 0 (EH) or disc = 0 (HH) in the
/// coordinates (Gamma/(1+Gamma), z). direction = +1 or -1 picks the sense.
/// Throws ContinuationStall.
BifurcationCurve trace_curve(const BifurcationPoint &seed, int direction, const StepControl &step = {});

/// Scalar defining function of a curve kind at (Gamma, z), double precision.
double curve_function(BifKind kind, double gamma, double z);

/// d/dGamma of the discriminant of the monic reduced polynomial at Gamma = 0,
/// one-sided with Richardson extrapolation in extended precision.
double disc_gamma_derivative_at_zero(double z);

struct LimitConstant
{
  std::string name;
  std::string value;     ///< computed, 25 significant digits
  std::string reference; ///< reference value
  double tolerance = 0;  ///< acceptance tolerance on |value - reference|
  double error = 0;
};

/// z1..z3, z4, z5, the four non-splitting common-root latitudes, z40, z50,
/// z60 and the exceptional restricted latitude.
std::vector<LimitConstant> limit_endpoints();

} // namespace cts
