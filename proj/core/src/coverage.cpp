#include "mmwcov/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mmwcov/errors.hpp"
#include "mmwcov/geometry.hpp"
#include "mmwcov/numerics.hpp"

namespace mmwcov {

namespace {

NetworkScenario with_tau(NetworkScenario s, const CoverageQuery& q) {
  if (q.power_control_tau) s.power_control_tau = *q.power_control_tau;
  return validate(std::move(s));
}

InterferenceOptions interference_options(const CoverageQuery& q) {
  InterferenceOptions o;
  o.collapse = q.collapse;
  o.fpc_bins = q.fpc_bins;
  return o;
}

constexpr QuadratureSpec kCoverageSpec{1e-8, 1e-12, 400, std::nullopt, 1.0};

}  // namespace

double CoverageQuery::threshold_for(int j) const {
  if (tier_thresholds.empty()) return threshold;
  if (j < 0 || static_cast<std::size_t>(j) >= tier_thresholds.size()) {
    throw std::out_of_range("no threshold configured for tier " + std::to_string(j));
  }
  return tier_thresholds[static_cast<std::size_t>(j)];
}

const EventCoverage& CoverageResult::event(int tier, LinkState s) const {
  for (const auto& e : per_event) {
    if (e.tier == tier && e.state == s) return e;
  }
  throw std::out_of_range("no coverage entry for tier " + std::to_string(tier));
}

CoverageEvaluator::CoverageEvaluator(const NetworkScenario& scenario, CoverageQuery shape)
    : scenario_(with_tau(scenario, shape)),
      shape_(std::move(shape)),
      association_(scenario_),
      interference_(scenario_, interference_options(shape_)),
      tau_(scenario_.power_control_tau),
      serving_gain_(scenario_.antenna.serving_gain()) {
  if (!(shape_.threshold >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
  if (!shape_.tier_thresholds.empty() &&
      shape_.tier_thresholds.size() != static_cast<std::size_t>(scenario_.tier_count()) + 1) {
    throw std::invalid_argument("per-tier thresholds must cover tiers 0..K");
  }
  if (tau_ > 0.0 && scenario_.power_control_mode != PowerControlMode::kPathLoss) {
    throw std::invalid_argument("analytic power control supports the path-loss mode only");
  }
}

double CoverageEvaluator::threshold_scale(int j) const {
  if (shape_.tier_thresholds.empty() || shape_.threshold == 0.0) return 1.0;
  return shape_.threshold_for(j) / shape_.threshold;
}

double CoverageEvaluator::mu(int j, LinkState s, double r, double threshold) const {
  const auto& ch = scenario_.channel;
  const double loss = ch.kappa(s) * std::pow(r, ch.alpha(s));
  return threshold * threshold_scale(j) * std::pow(loss, 1.0 - tau_) /
         (scenario_.ue_tx_power * serving_gain_);
}

double CoverageEvaluator::success_at(int j, LinkState s, double r, double threshold) const {
  if (threshold == 0.0) return 1.0;
  return success_given_mu(j, s, mu(j, s, r, threshold));
}

double CoverageEvaluator::success_given_mu(int j, LinkState s, double m) const {
  if (m == 0.0) return 1.0;
  const double noise =
      shape_.mode == CoverageMode::kInterferenceLimited ? 0.0 : scenario_.noise_power;
  const bool interfere = shape_.mode != CoverageMode::kNoiseLimited;
  auto laplace = [&](double x) { return interfere ? interference_.total(j, x) : 1.0; };

  const int n_shape =
      shape_.fading == FadingModel::kNakagami ? scenario_.channel.nakagami(s) : 1;
  if (n_shape == 1 || shape_.nakagami_form == NakagamiForm::kLiteral) {
    return std::exp(-m * noise) * laplace(m);
  }
  if (shape_.nakagami_form == NakagamiForm::kScaled) {
    const double eta = n_shape * std::exp(-log_factorial(n_shape) / n_shape);
    double out = 0.0;
    for (int n = 1; n <= n_shape; ++n) {
      const double x = n * eta * m;
      const double term = binomial(n_shape, n) * std::exp(-x * noise) * laplace(x);
      out += n % 2 == 1 ? term : -term;
    }
    return std::clamp(out, 0.0, 1.0);
  }

  // Exact gamma tail at s = N mu from the derivatives of E[exp(-s (I + noise))].
  const double sarg = n_shape * m;
  const int order = n_shape - 1;
  std::vector<double> lap(static_cast<std::size_t>(order) + 1, 0.0);
  if (interfere) {
    lap = interference_.total_derivatives(j, sarg, order);
  } else {
    lap[0] = 1.0;
  }
  const double e = std::exp(-sarg * noise);
  double out = 0.0;
  double scale = 1.0;  // s^m / m!
  for (int d = 0; d <= order; ++d) {
    double y = 0.0;
    double noise_d = e;  // (-noise)^i e^{-s noise}
    for (int i = 0; i <= d; ++i) {
      y += binomial(d, i) * noise_d * lap[static_cast<std::size_t>(d - i)];
      noise_d *= -noise;
    }
    out += scale * (d % 2 == 0 ? y : -y);
    scale *= sarg / (d + 1);
  }
  return std::clamp(out, 0.0, 1.0);
}

double CoverageEvaluator::joint_coverage(int j, LinkState s, double threshold) const {
  if (j != 0 && reachability(scenario_.tier(j).density, s, scenario_.channel.blockage_epsilon) == 0.0) {
    return 0.0;
  }
  QuadratureSpec spec = kCoverageSpec;
  spec.length_scale = association_.length_scale(j);
  return integrate_semi_infinite(
             [&](double r) {
               const double density = association_.joint_density(j, s, r);
               return density == 0.0 ? 0.0 : density * success_at(j, s, r, threshold);
             },
             0.0, spec)
      .value_or_throw("coverage of tier " + std::to_string(j) + std::string(suffix(s)));
}

double CoverageEvaluator::cluster_center(double threshold) const {
  const double sigma = scenario_.typical_sigma();
  const auto& ch = scenario_.channel;
  QuadratureSpec spec = kCoverageSpec;
  spec.length_scale = sigma;
  double out = 0.0;
  for (LinkState s : kLinkStates) {
    out += integrate_semi_infinite(
               [&](double r) {
                 if (r <= 0.0) return 0.0;
                 const double p = ch.state_probability(s, r);
                 if (p == 0.0) return 0.0;
                 const double s2 = sigma * sigma;
                 return p * r / s2 * std::exp(-0.5 * r * r / s2) * success_at(0, s, r, threshold);
               },
               0.0, spec)
               .value_or_throw("cluster-center coverage");
  }
  return out;
}

CoverageResult CoverageEvaluator::evaluate(double threshold) const {
  CoverageResult out;
  out.per_tier.assign(static_cast<std::size_t>(scenario_.tier_count()) + 1, 0.0);
  const double eps = scenario_.channel.blockage_epsilon;

  if (shape_.mode == CoverageMode::kClusterCenterOnly) {
    const double sigma = scenario_.typical_sigma();
    const auto& ch = scenario_.channel;
    QuadratureSpec spec = kCoverageSpec;
    spec.length_scale = sigma;
    for (LinkState s : kLinkStates) {
      EventCoverage e;
      e.tier = 0;
      e.state = s;
      e.association = cluster_state_tail(sigma, s, eps, 0.0);
      e.joint = integrate_semi_infinite(
                    [&](double r) {
                      if (r <= 0.0) return 0.0;
                      const double p = ch.state_probability(s, r);
                      const double s2 = sigma * sigma;
                      return p == 0.0 ? 0.0
                                      : p * r / s2 * std::exp(-0.5 * r * r / s2) *
                                            success_at(0, s, r, threshold);
                    },
                    0.0, spec)
                    .value_or_throw("cluster-center coverage");
      e.conditional = e.association > 0.0 ? e.joint / e.association : 0.0;
      out.per_tier[0] += e.joint;
      out.total += e.joint;
      out.per_event.push_back(e);
    }
    return out;
  }

  for (int j = 0; j <= scenario_.tier_count(); ++j) {
    for (LinkState s : kLinkStates) {
      EventCoverage e;
      e.tier = j;
      e.state = s;
      e.association = association_.probability(j, s);
      if (e.association > 0.0) e.joint = joint_coverage(j, s, threshold);
      e.conditional = e.association > 1e-14 ? std::clamp(e.joint / e.association, 0.0, 1.0) : 0.0;
      out.per_tier[static_cast<std::size_t>(j)] += e.joint;
      out.total += e.joint;
      out.per_event.push_back(e);
    }
  }
  return out;
}

namespace {

// Sum of adaptive integrals over unit-length pieces of [a, b]. A single
// Kronrod rule over a long log-scale range can step over a narrow peak.
template <class F>
double integrate_chunked(F& f, double a, double b, const QuadratureSpec& spec,
                         const char* what) {
  double out = 0.0;
  for (double lo = a; lo < b; lo += 1.0) {
    out += integrate_finite(f, lo, std::min(lo + 1.0, b), spec).value_or_throw(what);
  }
  return out;
}

}  // namespace

double CoverageEvaluator::joint_spectral_efficiency(int j, LinkState s) const {
  if (association_.probability(j, s) == 0.0) return 0.0;
  // mu per unit threshold at distance r, without the per-tier threshold scale.
  auto slope = [&](double r) {
    const auto& ch = scenario_.channel;
    return std::pow(ch.kappa(s) * std::pow(r, ch.alpha(s)), 1.0 - tau_) /
           (scenario_.ue_tx_power * serving_gain_);
  };
  // Both integrals run on logarithmic scales anchored at the event's
  // length scale; the bounds leave tails far below the tolerance.
  const double scale = association_.length_scale(j);
  const QuadratureSpec spec{1e-10, 1e-15, 4000, std::nullopt, 1.0};
  auto kernel = [&](double m) {
    auto f = [&](double z) {
      const double r = std::exp(z);
      const double density = association_.joint_density(j, s, r);
      return density == 0.0 ? 0.0 : density * r / (slope(r) + m);
    };
    return integrate_chunked(f, std::log(scale) - 30.0, std::log(scale) + 12.0, spec,
                             "spectral-efficiency kernel");
  };
  const double center = std::log(slope(4.0 * scale));
  auto integrand = [&](double y) {
    const double m = std::exp(center + y);
    const double phi = success_given_mu(j, s, m);
    return phi == 0.0 ? 0.0 : phi * kernel(m) * m;
  };
  return integrate_chunked(integrand, -60.0, 40.0, spec, "spectral efficiency") /
         std::numbers::ln2;
}

double conditional_coverage(const NetworkScenario& scenario, int j, LinkState s,
                            const CoverageQuery& query) {
  CoverageQuery q = query;
  q.fading = FadingModel::kRayleigh;
  const CoverageEvaluator ev(scenario, q);
  const double a = ev.association().probability(j, s);
  if (!(a > 1e-10)) throw std::domain_error("event has vanishing association probability");
  return std::clamp(ev.joint_coverage(j, s, q.threshold) / a, 0.0, 1.0);
}

double conditional_coverage_nakagami(const NetworkScenario& scenario, int j, LinkState s,
                                     const CoverageQuery& query) {
  CoverageQuery q = query;
  q.fading = FadingModel::kNakagami;
  const CoverageEvaluator ev(scenario, q);
  const double a = ev.association().probability(j, s);
  if (!(a > 1e-10)) throw std::domain_error("event has vanishing association probability");
  return std::clamp(ev.joint_coverage(j, s, q.threshold) / a, 0.0, 1.0);
}

CoverageResult network_coverage(const NetworkScenario& scenario, const CoverageQuery& query) {
  return CoverageEvaluator(scenario, query).evaluate();
}

double coverage_cluster_center(const NetworkScenario& scenario, const CoverageQuery& query) {
  return CoverageEvaluator(scenario, query).cluster_center(query.threshold);
}

TwoTierClosedForm closed_form_two_tier(const NetworkScenario& s, double threshold) {
  const auto& ch = s.channel;
  if (s.tier_count() != 2 || s.typical_ue_tier != 1 || ch.blockage_epsilon != 0.0 ||
      ch.alpha_los != 2.0 || ch.kappa_los != 1.0 || s.center_bias_value() != s.tier(1).bias) {
    throw std::invalid_argument(
        "closed form needs two tiers, clusters on tier 1, no blockage, alpha = 2, unit "
        "intercept and a center bias equal to the tier-1 bias");
  }
  const double sigma = s.typical_sigma();
  const double pi = std::numbers::pi;
  const double l1 = s.tier(1).density;
  const double l2 = s.tier(2).density;
  const double ratio = s.biased_power(2) / s.biased_power(1);
  const double two_s2 = 2.0 * sigma * sigma;

  TwoTierClosedForm f;
  f.c0 = 1.0 / two_s2 + pi * l1 + pi * l2 * ratio;
  f.c2 = 1.0 / (two_s2 * ratio) + pi * l1 / ratio + pi * l2;
  f.a10 = 1.0 / (two_s2 * f.c0);
  f.a11 = pi * l1 / f.c0;
  f.a12 = pi * l2 / f.c2;
  const double x = threshold * s.noise_power / (s.ue_tx_power * s.antenna.serving_gain());
  f.p10 = 1.0 / (two_s2 * (f.c0 + x) * f.a10);
  f.p11 = pi * l1 / ((f.c0 + x) * f.a11);
  f.p12 = pi * l2 / ((f.c2 + x) * f.a12);
  return f;
}

double spectral_efficiency(const std::function<double(double)>& coverage_of_threshold,
                           const QuadratureSpec& spec) {
  const auto result = integrate_finite(
      [&](double u) {
        const double one_minus = 1.0 - u;
        if (one_minus <= 0.0) return 0.0;
        return coverage_of_threshold(u / one_minus) / one_minus;
      },
      0.0, 1.0, spec);
  return result.value_or_throw("spectral efficiency") / std::numbers::ln2;
}

SpectralEfficiency spectral_efficiency(const NetworkScenario& scenario, const CoverageQuery& query) {
  const CoverageEvaluator ev(scenario, query);
  SpectralEfficiency out;
  for (int j = 0; j <= ev.scenario().tier_count(); ++j) {
    for (LinkState s : kLinkStates) {
      EventCoverage e;
      e.tier = j;
      e.state = s;
      e.association = ev.association().probability(j, s);
      e.joint = ev.joint_spectral_efficiency(j, s);
      e.conditional = e.association > 1e-14 ? e.joint / e.association : 0.0;
      out.total += e.joint;
      out.per_event.push_back(e);
    }
  }
  out.rate = out.total * ev.scenario().bandwidth;
  return out;
}

}  // namespace mmwcov
