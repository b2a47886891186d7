#include "mmwcov/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "mmwcov/errors.hpp"

namespace mmwcov {

namespace units {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace units

double ChannelParams::state_probability(LinkState s, double r) const {
  const double los = std::exp(-blockage_epsilon * r);
  return s == LinkState::kLos ? los : 1.0 - los;
}

const TierParams& NetworkScenario::tier(int j) const {
  if (j < 1 || j > tier_count()) {
    throw std::out_of_range("tier index " + std::to_string(j) + " outside 1.." +
                            std::to_string(tier_count()));
  }
  return tiers[static_cast<std::size_t>(j - 1)];
}

TierParams& NetworkScenario::tier(int j) {
  return const_cast<TierParams&>(std::as_const(*this).tier(j));
}

double NetworkScenario::typical_sigma() const {
  const auto& t = typical_tier();
  if (!t.cluster_sigma) throw std::logic_error("typical tier has no cluster spread");
  return *t.cluster_sigma;
}

double NetworkScenario::center_bias_value() const {
  return center_bias.value_or(typical_tier().bias);
}

double NetworkScenario::tx_power_of(int j) const {
  return j == 0 ? typical_tier().tx_power : tier(j).tx_power;
}

double NetworkScenario::biased_power(int j) const {
  if (j == 0) return typical_tier().tx_power * center_bias_value();
  const auto& t = tier(j);
  return t.tx_power * t.bias;
}

std::vector<int> NetworkScenario::cluster_tiers() const {
  std::vector<int> out;
  for (int j = 1; j <= tier_count(); ++j) {
    if (tier(j).hosts_clusters) out.push_back(j);
  }
  return out;
}

namespace {

bool positive_finite(double x) { return x > 0.0 && std::isfinite(x); }

}  // namespace

std::vector<std::string> invariant_violations(const NetworkScenario& s) {
  std::vector<std::string> v;
  auto need = [&v](bool ok, const std::string& msg) {
    if (!ok) v.push_back(msg);
  };

  need(!s.tiers.empty(), "tiers: at least one tier is required");
  for (int j = 1; j <= s.tier_count(); ++j) {
    const auto& t = s.tier(j);
    const std::string p = "tiers[" + std::to_string(j - 1) + "].";
    need(positive_finite(t.density), p + "density must be positive");
    need(positive_finite(t.tx_power), p + "tx_power must be positive");
    need(positive_finite(t.bias), p + "bias must be positive");
    if (t.hosts_clusters) {
      need(t.cluster_sigma.has_value(), p + "cluster_sigma is required when hosts_clusters is set");
    } else {
      need(!t.cluster_sigma.has_value(), p + "cluster_sigma is only allowed on cluster-hosting tiers");
    }
    if (t.cluster_sigma) need(positive_finite(*t.cluster_sigma), p + "cluster_sigma must be positive");
  }

  need(positive_finite(s.ue_tx_power), "ue_tx_power must be positive");
  need(s.noise_power >= 0.0 && std::isfinite(s.noise_power), "noise_power must be non-negative");
  need(s.power_control_tau >= 0.0 && s.power_control_tau <= 1.0,
       "power_control_tau must lie in [0, 1]");
  need(positive_finite(s.ue_density), "ue_density must be positive");
  need(positive_finite(s.bandwidth), "bandwidth must be positive");
  if (s.center_bias) need(positive_finite(*s.center_bias), "center_bias must be positive");

  const bool tier_ok = s.typical_ue_tier >= 1 && s.typical_ue_tier <= s.tier_count();
  need(tier_ok, "typical_ue_tier must name a configured tier");
  if (tier_ok) {
    need(s.tier(s.typical_ue_tier).hosts_clusters,
         "typical_ue_tier must name a cluster-hosting tier");
  }

  const auto& c = s.channel;
  need(positive_finite(c.alpha_los), "channel.alpha_los must be positive");
  need(positive_finite(c.alpha_nlos), "channel.alpha_nlos must be positive");
  need(positive_finite(c.kappa_los), "channel.kappa_los must be positive");
  need(positive_finite(c.kappa_nlos), "channel.kappa_nlos must be positive");
  need(c.blockage_epsilon >= 0.0 && std::isfinite(c.blockage_epsilon),
       "channel.blockage_epsilon must be non-negative");
  need(c.nakagami_los >= 1, "channel.nakagami_los must be at least 1");
  need(c.nakagami_nlos >= 1, "channel.nakagami_nlos must be at least 1");

  const auto& a = s.antenna;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  need(positive_finite(a.side_lobe_bs), "antenna.side_lobe_bs must be positive");
  need(positive_finite(a.side_lobe_ue), "antenna.side_lobe_ue must be positive");
  need(a.main_lobe_bs >= a.side_lobe_bs && std::isfinite(a.main_lobe_bs),
       "antenna.main_lobe_bs must be at least side_lobe_bs");
  need(a.main_lobe_ue >= a.side_lobe_ue && std::isfinite(a.main_lobe_ue),
       "antenna.main_lobe_ue must be at least side_lobe_ue");
  // A small tolerance lets 2 pi written in degrees (360 deg) through.
  need(a.beamwidth_bs > 0.0 && a.beamwidth_bs <= kTwoPi * (1.0 + 1e-12),
       "antenna.beamwidth_bs must lie in (0, 2 pi]");
  need(a.beamwidth_ue > 0.0 && a.beamwidth_ue <= kTwoPi * (1.0 + 1e-12),
       "antenna.beamwidth_ue must lie in (0, 2 pi]");
  return v;
}

NetworkScenario validate(NetworkScenario scenario) {
  auto violations = invariant_violations(scenario);
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return scenario;
}

double mean_cluster_size(const NetworkScenario& scenario, int tier) {
  if (!scenario.tier(tier).hosts_clusters) {
    throw std::invalid_argument("tier " + std::to_string(tier) + " does not host clusters");
  }
  return scenario.ue_density / scenario.tier(tier).density;
}

double free_space_intercept(double carrier_frequency_hz) {
  constexpr double kSpeedOfLight = 299792458.0;
  const double root = 4.0 * std::numbers::pi * carrier_frequency_hz / kSpeedOfLight;
  return root * root;
}

NetworkScenario reference_scenario(double cluster_sigma) {
  NetworkScenario s;
  TierParams small;
  small.density = 1e-4;
  small.tx_power = units::dbm_to_watt(30.0);
  small.bias = 1.0;
  small.hosts_clusters = true;
  small.cluster_sigma = cluster_sigma;
  TierParams macro;
  macro.density = 1e-5;
  macro.tx_power = units::dbm_to_watt(46.0);
  macro.bias = 1.0;
  s.tiers = {small, macro};

  s.ue_tx_power = units::dbm_to_watt(23.0);
  s.bandwidth = 100e6;
  s.noise_power = units::dbm_to_watt(-174.0 + 10.0 * std::log10(s.bandwidth) + 10.0);
  s.ue_density = 5e-4;
  s.typical_ue_tier = 1;
  s.power_control_tau = 0.0;

  const double kappa = free_space_intercept(28e9);
  s.channel.alpha_los = 2.0;
  s.channel.alpha_nlos = 4.0;
  s.channel.kappa_los = kappa;
  s.channel.kappa_nlos = kappa;
  s.channel.blockage_epsilon = std::numbers::sqrt2 / 200.0;

  s.antenna.main_lobe_bs = units::db_to_linear(10.0);
  s.antenna.main_lobe_ue = units::db_to_linear(10.0);
  s.antenna.side_lobe_bs = units::db_to_linear(-10.0);
  s.antenna.side_lobe_ue = units::db_to_linear(-10.0);
  s.antenna.beamwidth_bs = std::numbers::pi / 6.0;
  s.antenna.beamwidth_ue = std::numbers::pi / 6.0;
  return validate(std::move(s));
}

NetworkScenario closed_form_scenario(double cluster_sigma) {
  NetworkScenario s = reference_scenario(cluster_sigma);
  s.channel.blockage_epsilon = 0.0;
  s.channel.alpha_los = 2.0;
  s.channel.kappa_los = 1.0;
  s.channel.kappa_nlos = 1.0;
  return s;
}

}  // namespace mmwcov
