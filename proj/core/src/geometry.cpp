#include "mmwcov/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mmwcov/errors.hpp"
#include "mmwcov/numerics.hpp"

namespace mmwcov {

namespace {

constexpr double kPi = std::numbers::pi;

void require_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::domain_error("sigma must be positive");
}

void require_epsilon(double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::domain_error("epsilon must be non-negative");
  }
}

double rayleigh_pdf(double x, double sigma) {
  if (x < 0.0) return 0.0;
  const double s2 = sigma * sigma;
  return x / s2 * std::exp(-0.5 * x * x / s2);
}

double rayleigh_ccdf(double x, double sigma) {
  if (x <= 0.0) return 1.0;
  return std::exp(-0.5 * x * x / (sigma * sigma));
}

// Integral of e^{-eps t} f(t) over [rho, inf) for Rayleigh(sigma) f.
double los_tail(double sigma, double epsilon, double rho) {
  rho = std::max(rho, 0.0);
  if (epsilon == 0.0) return rayleigh_ccdf(rho, sigma);
  const double z = (rho + epsilon * sigma * sigma) / (sigma * std::numbers::sqrt2);
  const double bracket =
      1.0 - epsilon * sigma * std::sqrt(kPi / 2.0) * erfc_scaled(z);
  return std::exp(-0.5 * rho * rho / (sigma * sigma) - epsilon * rho) * std::max(bracket, 0.0);
}

}  // namespace

double los_probability(double r, double epsilon) {
  if (r < 0.0) throw std::domain_error("los_probability: negative distance");
  require_epsilon(epsilon);
  return std::exp(-epsilon * r);
}

double LosClassifier::los_probability(double r) const { return mmwcov::los_probability(r, epsilon); }

double LosClassifier::probability(LinkState s, double r) const {
  const double p = los_probability(r);
  return s == LinkState::kLos ? p : 1.0 - p;
}

DistanceLaw cluster_distance_law(double sigma) {
  require_sigma(sigma);
  return {[sigma](double x) { return rayleigh_pdf(x, sigma); },
          [sigma](double x) { return rayleigh_ccdf(x, sigma); }, 1.0};
}

double cluster_state_tail(double sigma, LinkState s, double epsilon, double rho) {
  require_sigma(sigma);
  require_epsilon(epsilon);
  const double los = los_tail(sigma, epsilon, rho);
  if (s == LinkState::kLos) return los;
  return std::max(rayleigh_ccdf(rho, sigma) - los, 0.0);
}

DistanceLaw cluster_distance_law_conditioned(double sigma, LinkState s, double epsilon) {
  require_sigma(sigma);
  require_epsilon(epsilon);
  const LosClassifier los{epsilon};
  QuadratureSpec spec;
  spec.length_scale = sigma;
  const double d_los =
      integrate_semi_infinite([&](double x) { return los.los_probability(x) * rayleigh_pdf(x, sigma); },
                              0.0, spec)
          .value_or_throw("cluster LOS probability");
  const double d = s == LinkState::kLos ? d_los : 1.0 - d_los;
  if (d < 1e-12) {
    throw NumericalError("degenerate conditioning: state probability below 1e-12", d, 0.0);
  }
  return {[sigma, s, los, d](double x) {
            return x < 0.0 ? 0.0 : los.probability(s, x) * rayleigh_pdf(x, sigma) / d;
          },
          [sigma, s, epsilon, d](double x) {
            return std::min(1.0, cluster_state_tail(sigma, s, epsilon, x) / d);
          },
          d};
}

double state_intensity(double lambda, LinkState s, double epsilon, double x) {
  require_epsilon(epsilon);
  if (x <= 0.0) return 0.0;
  const double full = kPi * lambda * x * x;
  if (epsilon == 0.0) return s == LinkState::kLos ? full : 0.0;
  const double u = epsilon * x;
  if (u < 1e-4) {
    // Series of 2 pi lambda (1 - (1+u) e^{-u}) / eps^2 about u = 0.
    const double los = full * (1.0 - 2.0 * u / 3.0 + u * u / 4.0);
    const double nlos = 2.0 * kPi * lambda * x * x * (u / 3.0 - u * u / 8.0 + u * u * u / 30.0);
    return s == LinkState::kLos ? los : nlos;
  }
  const double los =
      2.0 * kPi * lambda * (1.0 - (1.0 + u) * std::exp(-u)) / (epsilon * epsilon);
  return s == LinkState::kLos ? los : std::max(full - los, 0.0);
}

double state_intensity_total(double lambda, LinkState s, double epsilon) {
  require_epsilon(epsilon);
  if (epsilon == 0.0) {
    return s == LinkState::kLos ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return s == LinkState::kLos ? 2.0 * kPi * lambda / (epsilon * epsilon)
                              : std::numeric_limits<double>::infinity();
}

double void_probability(double lambda, LinkState s, double epsilon, double x) {
  return std::exp(-state_intensity(lambda, s, epsilon, x));
}

double reachability(double lambda, LinkState s, double epsilon) {
  return -std::expm1(-state_intensity_total(lambda, s, epsilon));
}

DistanceLaw nearest_bs_law(double lambda, LinkState s, double epsilon) {
  if (!(lambda > 0.0)) throw std::domain_error("nearest_bs_law: lambda must be positive");
  require_epsilon(epsilon);
  const double d = reachability(lambda, s, epsilon);
  if (d == 0.0) {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }, 0.0};
  }
  const double floor = std::exp(-state_intensity_total(lambda, s, epsilon));
  const LosClassifier los{epsilon};
  return {[=](double x) {
            if (x < 0.0) return 0.0;
            return 2.0 * kPi * lambda * x * los.probability(s, x) *
                   std::exp(-state_intensity(lambda, s, epsilon, x)) / d;
          },
          [=](double x) {
            if (x <= 0.0) return 1.0;
            return std::max(std::exp(-state_intensity(lambda, s, epsilon, x)) - floor, 0.0) / d;
          },
          d};
}

double rice_conditional_pdf(double r, double v, double sigma) {
  require_sigma(sigma);
  if (r < 0.0 || v < 0.0) throw std::domain_error("rice_conditional_pdf: negative distance");
  const double s2 = sigma * sigma;
  const double diff = r - v;
  return r / s2 * std::exp(-0.5 * diff * diff / s2) * bessel_i0_scaled(r * v / s2);
}

}  // namespace mmwcov
