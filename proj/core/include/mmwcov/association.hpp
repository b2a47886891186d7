#pragma once

// Largest-biased-received-power association of the typical clustered UE.
//
// Candidates are the UE's own cluster center (index 0, Rayleigh distance)
// and, for each tier k = 1..K, the BSs of a PPP split by the blockage model
// into independent LOS and NLOS PPPs. An event (j, s) means the serving BS
// belongs to tier j and its link is in state s.

#include <functional>
#include <vector>

#include "mmwcov/link_state.hpp"
#include "mmwcov/numerics.hpp"
#include "mmwcov/scenario.hpp"

namespace mmwcov {

/// Radius inside which a tier-k state-b BS would beat a tier-j state-s
/// server at distance r: (C r^alpha_s)^(1/alpha_b) with
/// C = P_k B_k kappa_s / (P_j B_j kappa_b). Index 0 is the cluster center.
double biased_power_threshold(const NetworkScenario& scenario, int k, LinkState b, int j,
                              LinkState s, double r);

/// How the density of the nearest same-state BS of tier j enters the
/// joint density of an event with j >= 1. kWeighted uses the unconditioned
/// density (reachability times the conditioned law); kUnweighted uses the
/// conditioned law alone. Only kWeighted is a probability measure.
enum class ReachabilityWiring { kWeighted, kUnweighted };

struct AssociationEvent {
  int tier = 0;
  LinkState state = LinkState::kLos;
  double probability = 0.0;
  /// Serving distance given the event; empty when the event is impossible.
  std::function<double(double)> serving_distance_pdf;
};

class AssociationModel {
 public:
  explicit AssociationModel(NetworkScenario scenario,
                            ReachabilityWiring wiring = ReachabilityWiring::kWeighted,
                            QuadratureSpec spec = {});

  const NetworkScenario& scenario() const { return scenario_; }

  /// Density in x of "event (j, s) with serving distance x".
  double joint_density(int j, LinkState s, double x) const;

  /// Probability that no other candidate beats a tier-j state-s BS at x,
  /// given that it is the nearest of its tier and state.
  double win_probability(int j, LinkState s, double x) const;

  /// A_{j,s}: the integral of joint_density. Throws NumericalError on
  /// non-convergence.
  double probability(int j, LinkState s) const;

  /// All 2(K+1) events, in tier-major order with LOS first. No sum check.
  std::vector<AssociationEvent> events() const;

  /// Initial segment width for integrals over the serving distance of tier j.
  double length_scale(int j) const;

  const QuadratureSpec& quadrature() const { return spec_; }

 private:
  double center_loses(int j, LinkState s, double x) const;
  double tier_clear(int k, int j, LinkState s, double x, bool skip_same_state) const;

  NetworkScenario scenario_;
  ReachabilityWiring wiring_;
  QuadratureSpec spec_;
  double sigma_;
  double epsilon_;
};

/// Events of the scenario with the physical wiring. Throws NumericalError
/// if the probabilities do not sum to 1 within 1e-4.
std::vector<AssociationEvent> association_probabilities(const NetworkScenario& scenario);

/// Serving-distance density given event (j, s). Throws std::domain_error
/// when the event probability is at most 1e-10.
std::function<double(double)> conditional_distance_pdf(const NetworkScenario& scenario, int j,
                                                       LinkState s);

}  // namespace mmwcov
