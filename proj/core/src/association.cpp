#include "mmwcov/association.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mmwcov/errors.hpp"
#include "mmwcov/geometry.hpp"

namespace mmwcov {

double biased_power_threshold(const NetworkScenario& scenario, int k, LinkState b, int j,
                              LinkState s, double r) {
  if (!(r > 0.0)) throw std::domain_error("biased_power_threshold: distance must be positive");
  const auto& ch = scenario.channel;
  const double c = scenario.biased_power(k) * ch.kappa(s) / (scenario.biased_power(j) * ch.kappa(b));
  if (k == j && b == s) return r;
  return std::pow(c * std::pow(r, ch.alpha(s)), 1.0 / ch.alpha(b));
}

AssociationModel::AssociationModel(NetworkScenario scenario, ReachabilityWiring wiring,
                                   QuadratureSpec spec)
    : scenario_(validate(std::move(scenario))),
      wiring_(wiring),
      spec_(spec),
      sigma_(scenario_.typical_sigma()),
      epsilon_(scenario_.channel.blockage_epsilon) {}

double AssociationModel::length_scale(int j) const {
  if (j == 0) return sigma_;
  const double spacing = 1.0 / std::sqrt(std::numbers::pi * scenario_.tier(j).density);
  return 0.25 * std::min(sigma_, spacing);
}

// Probability that the cluster center does not beat a tier-j state-s server at x.
double AssociationModel::center_loses(int j, LinkState s, double x) const {
  double out = 0.0;
  for (LinkState a : kLinkStates) {
    const double rho = biased_power_threshold(scenario_, 0, a, j, s, x);
    out += cluster_state_tail(sigma_, a, epsilon_, rho);
  }
  return out;
}

// Probability that tier k holds no BS that beats a tier-j state-s server at x.
double AssociationModel::tier_clear(int k, int j, LinkState s, double x,
                                    bool skip_same_state) const {
  const double lambda = scenario_.tier(k).density;
  double log_clear = 0.0;
  for (LinkState b : kLinkStates) {
    if (skip_same_state && b == s) continue;
    const double rho = biased_power_threshold(scenario_, k, b, j, s, x);
    log_clear -= state_intensity(lambda, b, epsilon_, rho);
  }
  return std::exp(log_clear);
}

double AssociationModel::win_probability(int j, LinkState s, double x) const {
  if (!(x > 0.0)) return j == 0 ? 1.0 : 0.0;
  double out = j == 0 ? 1.0 : center_loses(j, s, x);
  for (int k = 1; k <= scenario_.tier_count() && out > 0.0; ++k) {
    out *= tier_clear(k, j, s, x, k == j);
  }
  return out;
}

double AssociationModel::joint_density(int j, LinkState s, double x) const {
  if (!(x > 0.0)) return 0.0;
  const double state_p = scenario_.channel.state_probability(s, x);
  if (state_p == 0.0) return 0.0;
  double serving;
  if (j == 0) {
    const double s2 = sigma_ * sigma_;
    serving = state_p * x / s2 * std::exp(-0.5 * x * x / s2);
  } else {
    const double lambda = scenario_.tier(j).density;
    serving = 2.0 * std::numbers::pi * lambda * x * state_p *
              std::exp(-state_intensity(lambda, s, epsilon_, x));
    if (wiring_ == ReachabilityWiring::kUnweighted) {
      const double d = reachability(lambda, s, epsilon_);
      if (d == 0.0) return 0.0;
      serving /= d;
    }
  }
  if (serving == 0.0) return 0.0;
  return serving * win_probability(j, s, x);
}

double AssociationModel::probability(int j, LinkState s) const {
  if (j != 0 && reachability(scenario_.tier(j).density, s, epsilon_) == 0.0) return 0.0;
  if (j == 0 && s == LinkState::kNlos && epsilon_ == 0.0) return 0.0;
  QuadratureSpec spec = spec_;
  spec.length_scale = length_scale(j);
  const auto result =
      integrate_semi_infinite([&](double x) { return joint_density(j, s, x); }, 0.0, spec);
  return result.value_or_throw("association probability of tier " + std::to_string(j) +
                               std::string(suffix(s)));
}

std::vector<AssociationEvent> AssociationModel::events() const {
  auto shared = std::make_shared<const AssociationModel>(*this);
  std::vector<AssociationEvent> out;
  for (int j = 0; j <= scenario_.tier_count(); ++j) {
    for (LinkState s : kLinkStates) {
      AssociationEvent e;
      e.tier = j;
      e.state = s;
      e.probability = probability(j, s);
      if (e.probability > 1e-10) {
        const double a = e.probability;
        e.serving_distance_pdf = [shared, j, s, a](double x) {
          return shared->joint_density(j, s, x) / a;
        };
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<AssociationEvent> association_probabilities(const NetworkScenario& scenario) {
  auto events = AssociationModel(scenario).events();
  double total = 0.0;
  for (const auto& e : events) total += e.probability;
  if (std::abs(total - 1.0) > 1e-4) {
    throw NumericalError("association probabilities sum to " + std::to_string(total), total,
                         std::abs(total - 1.0));
  }
  return events;
}

std::function<double(double)> conditional_distance_pdf(const NetworkScenario& scenario, int j,
                                                       LinkState s) {
  auto model = std::make_shared<const AssociationModel>(scenario);
  const double a = model->probability(j, s);
  if (!(a > 1e-10)) {
    throw std::domain_error("conditional_distance_pdf: event " + std::to_string(j) +
                            std::string(suffix(s)) + " has vanishing probability");
  }
  return [model, j, s, a](double x) { return model->joint_density(j, s, x) / a; };
}

}  // namespace mmwcov
