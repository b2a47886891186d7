#pragma once

// Uplink SINR coverage of the typical clustered UE.
//
// For an association event (j, s) with serving distance r the main-link
// requirement h > mu (I + noise), mu = T (kappa_s r^alpha_s)^(1-tau) / (P_u G0),
// is averaged over the fading, the interference and the conditional law of r.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mmwcov/association.hpp"
#include "mmwcov/interference.hpp"
#include "mmwcov/link_state.hpp"
#include "mmwcov/scenario.hpp"

namespace mmwcov {

enum class CoverageMode { kFull, kNoiseLimited, kInterferenceLimited, kClusterCenterOnly };
enum class FadingModel { kRayleigh, kNakagami };

/// How gamma fading of integer shape N enters the coverage expression.
///   kScaled:     sum_n (-1)^(n+1) C(N,n) E[exp(-n eta mu (I + noise))], eta = N (N!)^(-1/N)
///   kLiteral:    the same sum with the argument left at mu, which telescopes
///                to the Rayleigh expression
///   kExactGamma: the exact gamma tail, sum_{m<N} (s^m/m!) (-1)^m d^m/ds^m E[exp(-s Y)]
///                at s = N mu, from derivatives of the Laplace transform
/// kScaled is the usual gamma-tail bound, not the exact tail; gamma-fading
/// simulation sides with kExactGamma, the default.
enum class NakagamiForm { kScaled, kLiteral, kExactGamma };

struct CoverageQuery {
  double threshold = 10.0;  // linear SINR threshold
  /// Per-serving-tier thresholds indexed 0..K; empty means the common threshold.
  std::vector<double> tier_thresholds;
  CoverageMode mode = CoverageMode::kFull;
  FadingModel fading = FadingModel::kRayleigh;
  NakagamiForm nakagami_form = NakagamiForm::kExactGamma;
  /// Overrides the scenario's power-control exponent when set.
  std::optional<double> power_control_tau;
  CollapseMode collapse = CollapseMode::kRician;
  int fpc_bins = 32;

  double threshold_for(int j) const;
};

struct EventCoverage {
  int tier = 0;
  LinkState state = LinkState::kLos;
  double association = 0.0;  // A_{j,s}
  double conditional = 0.0;  // P(SINR > T | event)
  double joint = 0.0;        // association * conditional
  double standard_error = 0.0;  // of `conditional` (simulation only)
  long long hits = 0;           // drops in the event (simulation only)
  bool low_confidence = false;
};

struct CoverageResult {
  std::vector<EventCoverage> per_event;
  std::vector<double> per_tier;  // indexed 0..K, sum over states of joint
  double total = 0.0;
  double standard_error = 0.0;
  std::string method = "analytic";

  const EventCoverage& event(int tier, LinkState s) const;
};

/// Reusable evaluator: the association and interference models (including
/// any power-control measures) are built once per scenario and query shape;
/// the threshold can then vary freely.
class CoverageEvaluator {
 public:
  CoverageEvaluator(const NetworkScenario& scenario, CoverageQuery shape);

  const NetworkScenario& scenario() const { return scenario_; }
  const AssociationModel& association() const { return association_; }
  const InterferenceModel& interference() const { return interference_; }

  /// mu at serving distance r for event (j, s) and threshold T.
  double mu(int j, LinkState s, double r, double threshold) const;

  /// P(SINR > T | event (j, s), serving distance r).
  double success_at(int j, LinkState s, double r, double threshold) const;
  /// The same as a function of mu alone.
  double success_given_mu(int j, LinkState s, double mu) const;

  /// A_{j,s} P(SINR > T | event), by quadrature over r.
  double joint_coverage(int j, LinkState s, double threshold) const;

  /// Full breakdown at threshold T (per-tier thresholds scale with T / query.threshold).
  CoverageResult evaluate(double threshold) const;
  CoverageResult evaluate() const { return evaluate(shape_.threshold); }

  /// Coverage when the UE is forced onto its cluster center: sum over s of
  /// the integral of p^s f_R times the success probability. Intra-cluster
  /// interference is absent.
  double cluster_center(double threshold) const;

  /// A_{j,s} times the conditional spectral efficiency of the event (bits/s/Hz).
  /// Since the success probability depends on (T, r) only through
  /// mu = T m(r), the threshold integral is folded into one integral over mu:
  /// (1/ln 2) * integral of phi(mu) K(mu), K(mu) = integral of joint(r) / (m(r) + mu) dr.
  double joint_spectral_efficiency(int j, LinkState s) const;

 private:
  double threshold_scale(int j) const;

  NetworkScenario scenario_;
  CoverageQuery shape_;
  AssociationModel association_;
  InterferenceModel interference_;
  double tau_;
  double serving_gain_;
};

/// P(SINR > T | event (j, s)) with Rayleigh fading (the query's fading is ignored).
double conditional_coverage(const NetworkScenario& scenario, int j, LinkState s,
                            const CoverageQuery& query);
/// The same with gamma fading of the scenario's Nakagami parameters.
double conditional_coverage_nakagami(const NetworkScenario& scenario, int j, LinkState s,
                                     const CoverageQuery& query);
CoverageResult network_coverage(const NetworkScenario& scenario, const CoverageQuery& query);
double coverage_cluster_center(const NetworkScenario& scenario, const CoverageQuery& query);

/// Closed forms of the two-tier, all-LOS, alpha = 2, unit-intercept,
/// noise-limited network: association and conditional coverage per serving
/// class 0 (cluster center), 1 (other small cell) and 2 (macro).
struct TwoTierClosedForm {
  double c0 = 0.0;
  double c2 = 0.0;
  double a10 = 0.0, a11 = 0.0, a12 = 0.0;
  double p10 = 0.0, p11 = 0.0, p12 = 0.0;

  double total_coverage() const { return a10 * p10 + a11 * p11 + a12 * p12; }
};
/// Throws std::invalid_argument unless the scenario meets those conditions.
TwoTierClosedForm closed_form_two_tier(const NetworkScenario& scenario, double threshold);

struct SpectralEfficiency {
  std::vector<EventCoverage> per_event;  // `conditional` holds the event's bits/s/Hz
  double total = 0.0;                    // bits/s/Hz
  double rate = 0.0;                     // bit/s, total times bandwidth
};

/// (1/ln 2) times the integral over T of P_C(T) / (1 + T), evaluated on
/// u = T / (1 + T) in (0, 1).
double spectral_efficiency(const std::function<double(double)>& coverage_of_threshold,
                           const QuadratureSpec& spec = {1e-7, 1e-10, 400, std::nullopt, 1.0});
SpectralEfficiency spectral_efficiency(const NetworkScenario& scenario, const CoverageQuery& query);

}  // namespace mmwcov
