#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mmwcov/link_state.hpp"

namespace mmwcov {

namespace units {

/// x dBm -> W.
double dbm_to_watt(double dbm);
/// x dB -> linear ratio.
double db_to_linear(double db);
double linear_to_db(double ratio);

}  // namespace units

struct TierParams {
  double density = 0.0;   // BSs per m^2
  double tx_power = 0.0;  // W
  double bias = 1.0;
  bool hosts_clusters = false;
  std::optional<double> cluster_sigma;  // m; present iff hosts_clusters
};

struct ChannelParams {
  double alpha_los = 2.0;
  double alpha_nlos = 4.0;
  double kappa_los = 1.0;
  double kappa_nlos = 1.0;
  double blockage_epsilon = 0.0;  // 1/m; LOS probability is exp(-epsilon r)
  int nakagami_los = 1;
  int nakagami_nlos = 1;

  double alpha(LinkState s) const { return s == LinkState::kLos ? alpha_los : alpha_nlos; }
  double kappa(LinkState s) const { return s == LinkState::kLos ? kappa_los : kappa_nlos; }
  int nakagami(LinkState s) const { return s == LinkState::kLos ? nakagami_los : nakagami_nlos; }
  double state_probability(LinkState s, double r) const;
};

struct AntennaParams {
  double main_lobe_bs = 1.0;
  double side_lobe_bs = 1.0;
  double main_lobe_ue = 1.0;
  double side_lobe_ue = 1.0;
  double beamwidth_bs = 0.0;  // rad, (0, 2 pi]
  double beamwidth_ue = 0.0;

  /// Boresight-aligned gain of the serving link, M_b M_u.
  double serving_gain() const { return main_lobe_bs * main_lobe_ue; }
};

enum class PowerControlMode { kPathLoss, kDistance };

/// The full, normalized parameter set. Immutable once validated.
///
/// Tier indices follow the association convention: 1..K name configured
/// tiers and 0 names the typical UE's own cluster-center BS, which is a
/// derived role (a BS of tier `typical_ue_tier`), never a configured tier.
struct NetworkScenario {
  std::vector<TierParams> tiers;
  double ue_tx_power = 0.0;  // W
  double noise_power = 0.0;  // W
  ChannelParams channel;
  AntennaParams antenna;
  double power_control_tau = 0.0;
  PowerControlMode power_control_mode = PowerControlMode::kPathLoss;
  double ue_density = 0.0;  // UEs per m^2
  int typical_ue_tier = 1;
  /// Association bias of the cluster center; defaults to the typical tier's bias.
  std::optional<double> center_bias;
  double bandwidth = 100e6;  // Hz, only used to turn spectral efficiency into a rate

  int tier_count() const { return static_cast<int>(tiers.size()); }
  /// Tier j in 1..K.
  const TierParams& tier(int j) const;
  TierParams& tier(int j);
  const TierParams& typical_tier() const { return tier(typical_ue_tier); }
  double typical_sigma() const;

  /// P_j B_j, with index 0 the cluster center (P_i, center bias).
  double biased_power(int j) const;
  double tx_power_of(int j) const;
  double center_bias_value() const;

  /// Indices of tiers that host UE clusters (the set of UE tiers).
  std::vector<int> cluster_tiers() const;

  bool operator==(const NetworkScenario&) const = default;
};

inline bool operator==(const TierParams& a, const TierParams& b) {
  return a.density == b.density && a.tx_power == b.tx_power && a.bias == b.bias &&
         a.hosts_clusters == b.hosts_clusters && a.cluster_sigma == b.cluster_sigma;
}
inline bool operator==(const ChannelParams& a, const ChannelParams& b) {
  return a.alpha_los == b.alpha_los && a.alpha_nlos == b.alpha_nlos &&
         a.kappa_los == b.kappa_los && a.kappa_nlos == b.kappa_nlos &&
         a.blockage_epsilon == b.blockage_epsilon && a.nakagami_los == b.nakagami_los &&
         a.nakagami_nlos == b.nakagami_nlos;
}
inline bool operator==(const AntennaParams& a, const AntennaParams& b) {
  return a.main_lobe_bs == b.main_lobe_bs && a.side_lobe_bs == b.side_lobe_bs &&
         a.main_lobe_ue == b.main_lobe_ue && a.side_lobe_ue == b.side_lobe_ue &&
         a.beamwidth_bs == b.beamwidth_bs && a.beamwidth_ue == b.beamwidth_ue;
}

/// Every violated invariant, each prefixed with its field path.
std::vector<std::string> invariant_violations(const NetworkScenario& scenario);

/// Returns the scenario unchanged when it is valid; throws ConfigError
/// listing every violation otherwise.
NetworkScenario validate(NetworkScenario scenario);

/// Average number of UEs per cluster of tier `tier`: lambda_u / lambda_tier.
double mean_cluster_size(const NetworkScenario& scenario, int tier);

/// Free-space path-loss intercept (4 pi f / c)^2 at carrier frequency f.
double free_space_intercept(double carrier_frequency_hz);

/// Reference two-tier deployment: small cells (tier 1, clustered UEs) under
/// macro cells (tier 2) at 28 GHz.
NetworkScenario reference_scenario(double cluster_sigma = 25.0);

/// The reference deployment without blockage (every link LOS), with alpha = 2
/// and unit intercepts: the setting of closed_form_two_tier.
NetworkScenario closed_form_scenario(double cluster_sigma = 25.0);

}  // namespace mmwcov
