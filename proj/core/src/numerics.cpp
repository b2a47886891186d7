#include "mmwcov/numerics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mmwcov/errors.hpp"

namespace mmwcov {

double QuadratureResult::value_or_throw(std::string_view what) const {
  if (!converged) {
    throw NumericalError("integral did not converge: " + std::string(what), value, error);
  }
  return value;
}

void check_spec(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (spec.max_subdivisions < 1) {
    throw std::invalid_argument("max_subdivisions must be at least 1");
  }
  if (!(spec.length_scale > 0.0) || !std::isfinite(spec.length_scale)) {
    throw std::invalid_argument("length_scale must be positive and finite");
  }
  if (spec.tail_decay_hint && !(*spec.tail_decay_hint > 0.0)) {
    throw std::invalid_argument("tail_decay_hint must be positive");
  }
}

double bessel_i0_scaled(double x) {
  if (!(x >= 0.0)) throw std::domain_error("bessel_i0_scaled: negative argument");
  if (x <= 20.0) {
    // Power series; every term is positive so there is no cancellation.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= q / (static_cast<double>(k) * static_cast<double>(k));
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-x);
  }
  // Asymptotic expansion, summed until the terms start growing.
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * odd * odd / (8.0 * k * x);
    if (next >= term || next < sum * 1e-17) break;
    term = next;
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double erfc_scaled(double x) {
  if (!(x >= 0.0)) throw std::domain_error("erfc_scaled: negative argument");
  if (x < 25.0) return std::exp(x * x) * std::erfc(x);
  const double inv2 = 1.0 / (x * x);
  const double series =
      1.0 + inv2 * (-0.5 + inv2 * (0.75 + inv2 * (-1.875 + inv2 * (6.5625 - inv2 * 29.53125))));
  return series / (x * std::sqrt(std::numbers::pi));
}

double log_factorial(int n) {
  if (n < 0) throw std::domain_error("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double out = 1.0;
  for (int i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

}  // namespace mmwcov
