#pragma once

// Adaptive quadrature and the few special functions the analytic modules need.
//
// The finite-interval integrator is a globally adaptive 7/15-point
// Gauss-Kronrod scheme: every step bisects the sub-interval with the largest
// error estimate. The error estimate follows the QUADPACK heuristic for the
// (G7, K15) pair. Semi-infinite integrals are truncated: the domain is covered
// by segments of doubling width, starting at QuadratureSpec::length_scale, and
// the sweep stops once consecutive segments contribute below tolerance.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace mmwcov {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 1e-12;
  int max_subdivisions = 400;
  /// Exponential decay rate of |f| beyond the bulk of the mass. When present
  /// the semi-infinite sweep also requires |f(b)| / rate to be negligible.
  std::optional<double> tail_decay_hint;
  /// Width of the first semi-infinite segment; also the minimum extent
  /// (16 widths) swept before truncation is considered.
  double length_scale = 1.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;

  /// Returns the value, or throws NumericalError naming `what` when the
  /// integrator did not reach its tolerance.
  double value_or_throw(std::string_view what) const;
};

/// A node of a discrete quadrature measure: sum_i w_i g(x_i) approximates
/// the integral of f * g for the density f the rule was built from.
struct WeightedNode {
  double x;
  double w;
};

/// Throws std::invalid_argument unless the settings are usable.
void check_spec(const QuadratureSpec& spec);

namespace detail {

// Abscissae and weights of the 15-point Kronrod rule and its embedded 7-point
// Gauss rule on [-1, 1] (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
};

template <class F>
Segment gauss_kronrod_15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  std::array<double, 7> f1{};
  std::array<double, 7> f2{};
  const double fc = f(center);
  double result_gauss = fc * kWg[3];
  double result_kronrod = fc * kWgk[7];
  double result_abs = std::abs(result_kronrod);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtw] = v1;
    f2[jtw] = v2;
    result_gauss += kWg[j] * (v1 + v2);
    result_kronrod += kWgk[jtw] * (v1 + v2);
    result_abs += kWgk[jtw] * (std::abs(v1) + std::abs(v2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double v1 = f(center - dx);
    const double v2 = f(center + dx);
    f1[jtwm1] = v1;
    f2[jtwm1] = v2;
    result_kronrod += kWgk[jtwm1] * (v1 + v2);
    result_abs += kWgk[jtwm1] * (std::abs(v1) + std::abs(v2));
  }

  const double mean = result_kronrod * 0.5;
  double result_asc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    result_asc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }

  const double value = result_kronrod * half;
  result_abs *= abs_half;
  result_asc *= abs_half;
  double error = std::abs((result_kronrod - result_gauss) * half);
  if (result_asc != 0.0 && error != 0.0) {
    error = result_asc * std::min(1.0, std::pow(200.0 * error / result_asc, 1.5));
  }
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kUflow = std::numeric_limits<double>::min();
  if (result_abs > kUflow / (50.0 * kEps)) {
    error = std::max(kEps * 50.0 * result_abs, error);
  }
  return {a, b, value, error};
}

/// Globally adaptive bisection; returns the final partition of [a, b].
template <class F>
std::vector<Segment> adaptive_partition(F& f, double a, double b, const QuadratureSpec& spec,
                                        QuadratureResult& out) {
  std::vector<Segment> heap;
  heap.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
  auto by_error = [](const Segment& lhs, const Segment& rhs) { return lhs.error < rhs.error; };

  heap.push_back(gauss_kronrod_15(f, a, b));
  out.evaluations = 15;
  double total = heap.front().value;
  double total_error = heap.front().error;

  while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= spec.max_subdivisions) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Segment worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval exhausted at machine resolution.
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), by_error);
      out.converged = false;
      break;
    }
    const Segment left = gauss_kronrod_15(f, worst.a, mid);
    const Segment right = gauss_kronrod_15(f, mid, worst.b);
    out.evaluations += 30;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);

    total = 0.0;
    total_error = 0.0;
    for (const auto& s : heap) {
      total += s.value;
      total_error += s.error;
    }
  }
  out.value = 0.0;
  out.error = 0.0;
  for (const auto& s : heap) {
    out.value += s.value;
    out.error += s.error;
  }
  return heap;
}

template <class F, class OnSegment>
QuadratureResult sweep_semi_infinite(F& f, double a, const QuadratureSpec& spec,
                                     OnSegment&& on_segment) {
  constexpr int kMaxSegments = 96;
  const double width = spec.length_scale;
  QuadratureSpec sub = spec;
  sub.abs_tol = spec.abs_tol / 8.0;

  QuadratureResult out;
  double lo = a;
  double hi = a + width;
  int quiet = 0;
  bool truncated = false;
  for (int seg = 0; seg < kMaxSegments; ++seg) {
    QuadratureResult part;
    auto pieces = adaptive_partition(f, lo, hi, sub, part);
    on_segment(pieces);
    out.value += part.value;
    out.error += part.error;
    out.evaluations += part.evaluations;
    out.converged = out.converged && part.converged;

    const double tol = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    bool negligible = std::abs(part.value) <= 0.25 * tol;
    if (negligible && spec.tail_decay_hint) {
      const double edge = std::abs(f(hi));
      ++out.evaluations;
      negligible = edge / *spec.tail_decay_hint <= 0.25 * tol;
    }
    quiet = negligible ? quiet + 1 : 0;
    if (quiet >= 2 && hi - a >= 16.0 * width) {
      out.error += std::abs(part.value);
      truncated = true;
      break;
    }
    lo = hi;
    hi = a + 2.0 * (hi - a);
  }
  if (!truncated) out.converged = false;
  return out;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b].
/// On non-convergence the best estimate is returned with converged = false.
template <class F>
QuadratureResult integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  check_spec(spec);
  QuadratureResult out;
  if (a == b) return out;
  detail::adaptive_partition(f, a, b, spec, out);
  return out;
}

/// Integral of f over [a, inf) by truncation; see the header comment.
template <class F>
QuadratureResult integrate_semi_infinite(F&& f, double a, const QuadratureSpec& spec = {}) {
  check_spec(spec);
  return detail::sweep_semi_infinite(f, a, spec, [](const std::vector<detail::Segment>&) {});
}

/// Builds a discrete rule for the measure with density f on [a, inf): the
/// Kronrod nodes of the final adaptive partition, weighted by f.
template <class F>
std::vector<WeightedNode> discretize_semi_infinite(F&& f, double a, const QuadratureSpec& spec,
                                                   QuadratureResult* summary = nullptr) {
  check_spec(spec);
  std::vector<WeightedNode> nodes;
  auto collect = [&](const std::vector<detail::Segment>& pieces) {
    for (const auto& s : pieces) {
      const double center = 0.5 * (s.a + s.b);
      const double half = 0.5 * (s.b - s.a);
      nodes.push_back({center, half * detail::kWgk[7] * f(center)});
      for (int j = 0; j < 7; ++j) {
        const double dx = half * detail::kXgk[static_cast<std::size_t>(j)];
        const double w = half * detail::kWgk[static_cast<std::size_t>(j)];
        nodes.push_back({center - dx, w * f(center - dx)});
        nodes.push_back({center + dx, w * f(center + dx)});
      }
    }
  };
  const auto result = detail::sweep_semi_infinite(f, a, spec, collect);
  if (summary != nullptr) *summary = result;
  std::sort(nodes.begin(), nodes.end(),
            [](const WeightedNode& l, const WeightedNode& r) { return l.x < r.x; });
  return nodes;
}

/// e^{-x} I0(x) for x >= 0, accurate to about 1e-15 relative.
double bessel_i0_scaled(double x);

/// e^{x^2} erfc(x) for x >= 0 (no overflow for large x).
double erfc_scaled(double x);

/// ln n! for n >= 0.
double log_factorial(int n);

/// Binomial coefficient C(n, k) as a double.
double binomial(int n, int k);

}  // namespace mmwcov
