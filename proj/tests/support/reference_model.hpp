#pragma once

// Direct transcriptions of the association and noise-limited coverage
// integrals for the max-biased-power rule, written without any of the
// library's building blocks. Used as oracles by the unit and acceptance tests.

#include <cmath>
#include <numbers>

#include "mmwcov/channel.hpp"
#include "mmwcov/link_state.hpp"
#include "mmwcov/scenario.hpp"
#include "oracles.hpp"

namespace mmwcov::testing {

inline double p_state(const NetworkScenario& s, LinkState st, double r) {
  const double los = std::exp(-s.channel.blockage_epsilon * r);
  return st == LinkState::kLos ? los : 1.0 - los;
}

// Mean number of tier-k BSs in state b within distance rho.
inline double ref_intensity(const NetworkScenario& s, int k, LinkState b, double rho) {
  const double lam = s.tier(k).density;
  const double eps = s.channel.blockage_epsilon;
  const double disc = std::numbers::pi * lam * rho * rho;
  double los = disc;
  if (eps > 0.0) {
    const double e = eps * rho;
    // 1 - e^{-x}(1 + x) loses precision for small x; use the series there.
    const double core = e < 1e-3 ? e * e / 2.0 - e * e * e / 3.0 + e * e * e * e / 8.0
                                 : 1.0 - std::exp(-e) * (1.0 + e);
    los = 2.0 * std::numbers::pi * lam / (eps * eps) * core;
  }
  return b == LinkState::kLos ? los : std::max(0.0, disc - los);
}

inline double ref_loss(const NetworkScenario& s, LinkState st, double r) {
  const auto& c = s.channel;
  return st == LinkState::kLos ? c.kappa_los * std::pow(r, c.alpha_los)
                               : c.kappa_nlos * std::pow(r, c.alpha_nlos);
}

// Distance within which a (k, b) BS beats biased received power `target`.
inline double ref_radius(const NetworkScenario& s, int k, LinkState b, double target) {
  const auto& c = s.channel;
  const double pb = s.tier(k).tx_power * s.tier(k).bias;
  const double kappa = b == LinkState::kLos ? c.kappa_los : c.kappa_nlos;
  const double alpha = b == LinkState::kLos ? c.alpha_los : c.alpha_nlos;
  return std::pow(pb / (target * kappa), 1.0 / alpha);
}

inline double center_bias(const NetworkScenario& s) {
  return s.center_bias ? *s.center_bias : s.tier(s.typical_ue_tier).bias;
}

// Probability that no PPP BS other than (skip_k, skip_b) beats `target`.
inline double ref_ppp_clear(const NetworkScenario& s, double target, int skip_k, LinkState skip_b) {
  double lam = 0.0;
  for (int k = 1; k <= s.tier_count(); ++k) {
    for (LinkState b : kLinkStates) {
      if (k == skip_k && b == skip_b) continue;
      lam += ref_intensity(s, k, b, ref_radius(s, k, b, target));
    }
  }
  return std::exp(-lam);
}

// Integral of p^st(t) (t / sigma^2) exp(-t^2 / 2 sigma^2) over [rho, inf). The LOS
// part follows by integration by parts; extended precision keeps
// exp(eps^2 sigma^2 / 2) erfc(.) finite and the NLOS difference clean.
inline double rayleigh_state_tail(double sigma, double eps, double rho, LinkState st) {
  using ld = long double;
  const ld sg = sigma;
  const ld e = eps;
  const ld r = rho;
  const ld all = std::exp(-r * r / (2 * sg * sg));
  const ld gauss = std::exp(-r * r / (2 * sg * sg) - e * r);
  const ld corr = e * sg * std::sqrt(std::numbers::pi_v<ld> / 2) * std::exp(e * e * sg * sg / 2) *
                  std::erfc((r + e * sg * sg) / (sg * std::sqrt(ld{2})));
  const ld los = gauss - corr;
  return static_cast<double>(std::max(ld{0}, st == LinkState::kLos ? los : all - los));
}

/// Density in x of "served by a (j, st) BS at distance x" (j = 0: cluster center).
inline double ref_joint_density(const NetworkScenario& s, int j, LinkState st, double x) {
  if (x <= 0.0) return 0.0;
  const double sigma = *s.tier(s.typical_ue_tier).cluster_sigma;
  const double s2 = sigma * sigma;
  const double ps = p_state(s, st, x);
  if (ps == 0.0) return 0.0;
  if (j == 0) {
    const double target = s.tier(s.typical_ue_tier).tx_power * center_bias(s) / ref_loss(s, st, x);
    const double f = x / s2 * std::exp(-x * x / (2.0 * s2));
    return f * ps * ref_ppp_clear(s, target, -1, st);
  }
  const double target = s.tier(j).tx_power * s.tier(j).bias / ref_loss(s, st, x);
  const double lam = s.tier(j).density;
  // Unconditioned density of the nearest state-st BS of tier j.
  const double nearest =
      2.0 * std::numbers::pi * lam * x * ps * std::exp(-ref_intensity(s, j, st, x));
  // The cluster center must lose in whichever state it is in.
  const double p0 = s.tier(s.typical_ue_tier).tx_power * center_bias(s);
  double center_loses = 0.0;
  for (LinkState b : kLinkStates) {
    const double kappa = b == LinkState::kLos ? s.channel.kappa_los : s.channel.kappa_nlos;
    const double alpha = b == LinkState::kLos ? s.channel.alpha_los : s.channel.alpha_nlos;
    const double rho = std::pow(p0 / (target * kappa), 1.0 / alpha);
    center_loses += rayleigh_state_tail(sigma, s.channel.blockage_epsilon, rho, b);
  }
  return nearest * center_loses * ref_ppp_clear(s, target, j, st);
}

inline double ref_association(const NetworkScenario& s, int j, LinkState st) {
  auto f = [&](double x) { return ref_joint_density(s, j, st, x); };
  const double scale = j == 0 ? *s.tier(s.typical_ue_tier).cluster_sigma
                              : 1.0 / std::sqrt(std::numbers::pi * s.tier(j).density);
  return reference_integral_split(f, 0.0, {scale, 4.0 * scale, 16.0 * scale}, kInf, 1e-11);
}

/// A_{j,s} P(success), where the success probability given the serving link is
/// phi(mu) with mu = T L_s(x) / (P_u G0).
template <class Phi>
double ref_joint_coverage(const NetworkScenario& s, int j, LinkState st, double threshold, Phi phi) {
  const double g0 = s.antenna.main_lobe_bs * s.antenna.main_lobe_ue;
  auto f = [&](double x) {
    const double d = ref_joint_density(s, j, st, x);
    if (d == 0.0) return 0.0;
    return d * phi(threshold * ref_loss(s, st, x) / (s.ue_tx_power * g0));
  };
  const double scale = j == 0 ? *s.tier(s.typical_ue_tier).cluster_sigma
                              : 1.0 / std::sqrt(std::numbers::pi * s.tier(j).density);
  return reference_integral_split(f, 0.0, {scale, 4.0 * scale, 16.0 * scale}, kInf, 1e-10);
}

/// Noise-limited joint coverage under Rayleigh fading.
inline double ref_joint_coverage_snr(const NetworkScenario& s, int j, LinkState st, double threshold) {
  return ref_joint_coverage(s, j, st, threshold,
                            [&](double mu) { return std::exp(-mu * s.noise_power); });
}

/// Intra-cluster interference transform at a tier-1 server without power control:
/// E[1 / (1 + mu P_u G / L(R))] over the Rayleigh member distance, its state and the gain.
inline double ref_intra(const NetworkScenario& s, double mu) {
  const double sigma = *s.tier(1).cluster_sigma;
  const auto atoms = gain_distribution(s.antenna);
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    double acc = 0.0;
    for (LinkState a : kLinkStates) {
      const double l = ref_loss(s, a, r);
      for (const auto& g : atoms) {
        acc += p_state(s, a, r) * g.probability / (1.0 + mu * s.ue_tx_power * g.gain / l);
      }
    }
    return r / (sigma * sigma) * std::exp(-r * r / (2 * sigma * sigma)) * acc;
  };
  return reference_integral_split(f, 0.0, {sigma, 4 * sigma}, kInf, 1e-12);
}

/// Inter-cell transform from tier 1 without power control: PGFL of a density-lambda PPP of interferers around the server.
inline double ref_intercell(const NetworkScenario& s, double mu) {
  const double lambda = s.tier(1).density;
  const auto atoms = gain_distribution(s.antenna);
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    double acc = 0.0;
    for (LinkState a : kLinkStates) {
      const double l = ref_loss(s, a, r);
      for (const auto& g : atoms) {
        const double x = mu * s.ue_tx_power * g.gain / l;
        acc += p_state(s, a, r) * g.probability * x / (1.0 + x);
      }
    }
    return r * acc;
  };
  const double integral =
      reference_integral_split(f, 0.0, {10.0, 100.0, 1000.0}, kInf, 1e-12);
  return std::exp(-2.0 * std::numbers::pi * lambda * integral);
}

}  // namespace mmwcov::testing
