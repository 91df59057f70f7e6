#pragma once

// Scalar types, numeric constants and the error hierarchy shared by every
// module of the tetrahedral-stability library.

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace cts
{

/// 50 significant decimal digits, software arithmetic.
using Extended =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>,
                                  boost::multiprecision::et_off>;

/// 100 significant decimal digits; used where roots cluster at the scale of
/// a small mass ratio raised to the fourth power.
using Wide =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>,
                                  boost::multiprecision::et_off>;

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

#define CTS_DECLARE_ERROR(Name)                                                \
  class Name : public Error                                                    \
  {                                                                            \
  public:                                                                      \
    using Error::Error;                                                        \
  }

CTS_DECLARE_ERROR(DomainError);
CTS_DECLARE_ERROR(AdmissibilityError);
CTS_DECLARE_ERROR(SingularityError);
CTS_DECLARE_ERROR(ConvergenceError);
CTS_DECLARE_ERROR(NumericalError);
CTS_DECLARE_ERROR(DeflationError);
CTS_DECLARE_ERROR(StepFailure);
CTS_DECLARE_ERROR(ContinuationStall);
CTS_DECLARE_ERROR(AmbiguousKind);
CTS_DECLARE_ERROR(IOError);

#undef CTS_DECLARE_ERROR

// ---------------------------------------------------------------------------
// Constants, evaluated in the requested precision.

template <class T>
struct constants
{
  static T sqrt3() { return sqrt(T(3)); }
  /// D(0) = 32 / (9 sqrt 3).
  static T alpha() { return T(32) / (T(9) * sqrt3()); }
  static T pi() { return boost::math::constants::pi<T>(); }
};

template <>
struct constants<double>
{
  static double sqrt3() { return std::sqrt(3.0); }
  static double alpha() { return 32.0 / (9.0 * std::sqrt(3.0)); }
  static double pi() { return 3.14159265358979323846; }
};

/// Conversion to double that works for builtin and multiprecision scalars.
template <class T>
double to_double(const T &x)
{
  if constexpr (std::is_floating_point_v<T>)
    return static_cast<double>(x);
  else
    return x.template convert_to<double>();
}

} // namespace cts
