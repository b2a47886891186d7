#pragma once

// Laplace transforms E[exp(-mu I)] of the uplink interference seen by a
// tier-j serving BS.
//
// The intra-cluster term is the active member of the serving BS's own
// cluster (Rayleigh distance with that tier's spread). The inter-cell term
// of a cluster-hosting tier k treats the active UEs of all other tier-k
// cells as a PPP of density lambda_k around the serving BS, which is what the
// Gaussian displacement of a PPP of cluster centers produces.
//
// With fractional power control an interferer transmits P_u (kappa_b t^alpha_b)^tau,
// where t is the length of its own serving link. The factor q = (kappa_b t^alpha_b)^tau
// is drawn from a discrete measure built from the association law of a
// typical UE of tier k (PowerControlMeasure).

#include <map>
#include <vector>

#include "mmwcov/channel.hpp"
#include "mmwcov/numerics.hpp"
#include "mmwcov/scenario.hpp"

namespace mmwcov {

/// kRician replaces the displaced-UE field by a PPP (the integral of a Rice
/// density over the PPP ring collapses); kExactRicianDoubleIntegral keeps
/// the integral over the cluster-center distance and the Rice law.
enum class CollapseMode { kRician, kExactRicianDoubleIntegral };

/// Discrete law of the FPC power factor q of an interfering UE.
struct PowerControlMeasure {
  std::vector<double> factor;
  std::vector<double> weight;  // sums to 1
};

/// Law of (kappa_b t^alpha_b)^tau over every association event (m, b) of a
/// typical UE of cluster tier k. `bins` > 0 compresses it to that many
/// equal-weight quantile bins (weighted mean factor per bin); 0 keeps the
/// full quadrature measure.
PowerControlMeasure power_control_measure(const NetworkScenario& scenario, int k, double tau,
                                          int bins);

struct InterferenceOptions {
  CollapseMode collapse = CollapseMode::kRician;
  int fpc_bins = 32;
  QuadratureSpec quadrature{1e-9, 1e-14, 400, std::nullopt, 1.0};
};

class InterferenceModel {
 public:
  explicit InterferenceModel(const NetworkScenario& scenario, InterferenceOptions options = {});

  const NetworkScenario& scenario() const { return scenario_; }
  double tau() const { return tau_; }

  /// Intra-cluster transform at a tier-j server; 1 for the cluster center
  /// (j = 0) and for tiers without clusters.
  double intra_cluster(int j, double mu) const;
  /// Inter-cell transform from the active UEs of cluster tier k; 1 when k
  /// hosts no clusters, 0 when the mean interference is infinite.
  double intercell(int j, int k, double mu) const;

  /// The same with the FPC measure of the scenario's tau (also valid at tau = 0).
  double intra_cluster_fpc(int j, double mu) const;
  double intercell_fpc(int j, int k, double mu) const;

  /// Product of the intra-cluster term and every inter-cell term, using the
  /// FPC variants when tau > 0.
  double total(int j, double mu) const;

  /// Derivatives d^m/dmu^m of total(j, mu) for m = 0..order.
  std::vector<double> total_derivatives(int j, double mu, int order) const;

  /// The FPC measure of cluster tier k (a single unit atom when tau = 0).
  const PowerControlMeasure& measure(int k) const;

  /// Transforms under an explicitly supplied FPC measure.
  double intra_cluster_given(int j, double mu, const PowerControlMeasure& q) const;
  double intercell_given(int k, double mu, const PowerControlMeasure& q) const;

 private:
  double intra_impl(int j, double mu, const PowerControlMeasure& q, int order) const;
  double intercell_integral(int k, double mu, const PowerControlMeasure& q, int order) const;
  double intercell_exact(int k, double mu) const;
  bool intercell_diverges(double mu) const;

  NetworkScenario scenario_;
  InterferenceOptions options_;
  double tau_;
  std::vector<GainAtom> gains_;
  PowerControlMeasure unit_measure_;
  std::map<int, PowerControlMeasure> measures_;
};

/// Free-function forms of the model's transforms.
double laplace_intra_cluster(const NetworkScenario& scenario, int j, double mu);
double laplace_intercell(const NetworkScenario& scenario, int j, int k, double mu,
                         CollapseMode collapse = CollapseMode::kRician);
double laplace_intra_cluster_fpc(const NetworkScenario& scenario, int j, double mu,
                                 const PowerControlMeasure& measure);
double laplace_intercell_fpc(const NetworkScenario& scenario, int j, int k, double mu,
                             const PowerControlMeasure& measure);

}  // namespace mmwcov
