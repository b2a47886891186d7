#pragma once

// Distance laws of the clustered network: the UE-to-cluster-center distance,
// the nearest LOS/NLOS BS of a PPP tier under exponential blockage, and the
// Rice law of a Gaussian-displaced point.

#include <functional>

#include "mmwcov/link_state.hpp"

namespace mmwcov {

struct DistanceLaw {
  std::function<double(double)> pdf;
  std::function<double(double)> ccdf;
  /// Probability of the conditioning event the law is normalized by
  /// (1 for unconditioned laws).
  double normalizer = 1.0;
};

/// Exponential blockage: a link of length r is LOS with probability e^{-epsilon r}.
struct LosClassifier {
  double epsilon = 0.0;

  double los_probability(double r) const;
  double probability(LinkState s, double r) const;
};

/// e^{-epsilon r}; throws std::domain_error for r < 0 or epsilon < 0.
double los_probability(double r, double epsilon);

/// Rayleigh(sigma): distance from a UE to its cluster center.
DistanceLaw cluster_distance_law(double sigma);

/// The cluster-center distance given the link is in state s. The normalizer
/// is the state probability D^s. Throws NumericalError when D^s < 1e-12.
DistanceLaw cluster_distance_law_conditioned(double sigma, LinkState s, double epsilon);

/// Closed form of the integral of p^s(t) f(t) over [rho, inf) for the Rayleigh
/// cluster law f; at rho = 0 it is the state probability D^s.
double cluster_state_tail(double sigma, LinkState s, double epsilon, double rho);

/// Mean number of state-s BSs of a density-lambda PPP within distance x:
/// 2 pi lambda times the integral of t p^s(t) over [0, x].
double state_intensity(double lambda, LinkState s, double epsilon, double x);
/// The same over the whole plane (infinite for NLOS when epsilon > 0).
double state_intensity_total(double lambda, LinkState s, double epsilon);

/// Probability that no state-s BS lies within x.
double void_probability(double lambda, LinkState s, double epsilon, double x);

/// Probability that at least one state-s BS exists.
double reachability(double lambda, LinkState s, double epsilon);

/// Distance to the nearest state-s BS given one exists; the normalizer is
/// the reachability. When it is zero (NLOS with epsilon = 0) the law is
/// returned with zero pdf and ccdf.
DistanceLaw nearest_bs_law(double lambda, LinkState s, double epsilon);

/// Rice density of |v + X| for X bivariate Gaussian with per-axis sigma.
double rice_conditional_pdf(double r, double v, double sigma);

}  // namespace mmwcov
