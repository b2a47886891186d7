#pragma once

// Network-drop simulator. Each trial places the BS tiers as Poisson point
// sets in a square window, scatters the active UEs and evaluates the uplink
// SINR of the typical UE at the BS that maximizes its biased received power.
//
// Window: centered on the typical UE's cluster center (or on the UE in the
// uniform-UE baseline), half-width H >= 5 max{1/sqrt(pi lambda_min), 3 sigma_max, 3/epsilon}.
// LOS states come from a per-drop hash of (UE, BS), so a link keeps its
// state between the association and SINR phases.
//
// Trial t draws from mt19937_64 seeded with seed_seq{seed, t}; estimators
// reduce fixed blocks of trials in index order, so results do not depend on
// the worker count.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <vector>

#include "mmwcov/coverage.hpp"
#include "mmwcov/link_state.hpp"
#include "mmwcov/scenario.hpp"

namespace mmwcov {

/// kClustered: Gaussian clusters around the cluster-tier BSs. kUniform: the
/// PPP baseline, where UEs (typical and interfering) ignore BS positions.
enum class UeModel { kClustered, kUniform };

struct DropOptions {
  std::optional<double> half_width;  // m; automatic when empty
  UeModel ue_model = UeModel::kClustered;
  FadingModel fading = FadingModel::kRayleigh;
  std::optional<double> power_control_tau;  // scenario's value when empty
  bool force_cluster_center = false;        // serve the UE by its cluster center
  bool association_only = false;            // stop after association (no powers drawn)
};

struct Station {
  double x = 0.0;
  double y = 0.0;
  int tier = 1;  // 1..K
};

struct ActiveUe {
  double x = 0.0;
  double y = 0.0;
  int home = -1;  // index of the station whose cluster it belongs to, -1 if none
  LinkState state = LinkState::kLos;  // of its link to the typical UE's server
  double distance = 0.0;              // to the server
  double gain = 1.0;
  double fading = 1.0;
  double power = 0.0;  // W, after power control
  double received = 0.0;
};

struct DropRealization {
  std::vector<Station> stations;
  int parent = -1;  // station index of the typical UE's cluster center
  double ue_x = 0.0;
  double ue_y = 0.0;
  int serving = -1;       // station index
  int serving_tier = 0;   // 0 (cluster center) or 1..K
  LinkState serving_state = LinkState::kLos;
  double serving_distance = 0.0;
  double signal = 0.0;             // W, includes fading and G0
  double intra_interference = 0.0; // member of the serving BS's own cluster
  std::vector<double> intercell_interference;  // per tier, indexed 0..K
  double noise = 0.0;
  double sinr = 0.0;
  std::vector<ActiveUe> interferers;

  double interference() const;
};

/// Smallest admissible window half-width for the scenario.
double guard_half_width(const NetworkScenario& scenario, UeModel model = UeModel::kClustered);

/// One drop. Throws std::invalid_argument when options.half_width is below the guard.
DropRealization sample_drop(const NetworkScenario& scenario, const DropOptions& options,
                            std::mt19937_64& rng);

/// The random stream of trial `trial` under `seed`.
std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial);

/// One text line per drop: positions, serving link, powers and SINR.
void write_drop(std::ostream& out, long long trial, const DropRealization& drop);

struct MonteCarloOptions {
  long long trials = 100000;
  std::uint64_t seed = 1;
  /// 0 means the MMWCOV_THREADS environment variable, else the hardware count.
  int threads = 0;
  std::optional<double> half_width;
  UeModel ue_model = UeModel::kClustered;
};

struct EstimatorOutput {
  double estimate = 0.0;
  double standard_error = 0.0;
  long long trials = 0;
  std::uint64_t seed = 0;
};

struct EventEstimate {
  int tier = 0;
  LinkState state = LinkState::kLos;
  EstimatorOutput frequency;
  std::vector<double> distances;  // serving distances, when requested
};

/// Empirical frequency of every association event (j, s), j = 0..K.
std::vector<EventEstimate> estimate_association(const NetworkScenario& scenario,
                                                const MonteCarloOptions& options,
                                                bool keep_distances = false);

/// Empirical coverage at each threshold over the same drops. Events with
/// fewer than 50 drops are flagged low-confidence.
std::vector<CoverageResult> estimate_coverage(const NetworkScenario& scenario,
                                              const CoverageQuery& query,
                                              const std::vector<double>& thresholds,
                                              const MonteCarloOptions& options);
CoverageResult estimate_coverage(const NetworkScenario& scenario, const CoverageQuery& query,
                                 const MonteCarloOptions& options);

struct RateEstimate {
  EstimatorOutput spectral_efficiency;  // bits/s/Hz
  double rate = 0.0;                    // bit/s
};

/// Mean of log2(1 + SINR) with SINR drawn by `sinr_source(trial, rng)`.
RateEstimate estimate_rate(const std::function<double(long long, std::mt19937_64&)>& sinr_source,
                           const MonteCarloOptions& options, double bandwidth = 1.0);
RateEstimate estimate_rate(const NetworkScenario& scenario, const CoverageQuery& query,
                           const MonteCarloOptions& options);

enum class InterferenceTerm { kIntraCluster, kIntercell, kTotal };

/// Empirical E[exp(-mu I)] at a tier-j BS placed at the window center, for
/// each mu. kIntercell takes the UEs of cluster tier k only. The power
/// control exponent is the scenario's.
std::vector<EstimatorOutput> estimate_laplace(const NetworkScenario& scenario, int j,
                                              InterferenceTerm term, int k,
                                              const std::vector<double>& mus,
                                              const MonteCarloOptions& options);

/// Worker count used when MonteCarloOptions::threads is 0.
int default_thread_count();

}  // namespace mmwcov
