#pragma once

// Reference integrals and special functions from Boost.Math, used as
// implementations independent of the library under test.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

namespace mmwcov::testing {

/// Adaptive Gauss-Kronrod (30/61) over [a, b]; b may be +infinity.
template <class F>
double reference_integral(F f, double a, double b, double tol = 1e-12) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol);
}

/// Reference integral over [a, b] split at the given interior points.
template <class F>
double reference_integral_split(F f, double a, std::initializer_list<double> cuts, double b,
                                double tol = 1e-12) {
  double out = 0.0;
  double lo = a;
  for (double c : cuts) {
    out += reference_integral(f, lo, c, tol);
    lo = c;
  }
  return out + reference_integral(f, lo, b, tol);
}

inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace mmwcov::testing
