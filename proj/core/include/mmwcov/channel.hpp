#pragma once

#include <random>
#include <vector>

#include "mmwcov/link_state.hpp"
#include "mmwcov/scenario.hpp"

namespace mmwcov {

/// One outcome of the random beam alignment of an interfering link.
struct GainAtom {
  double gain;
  double probability;
};

/// Sectored-antenna gain law: up to four atoms (MM, Mm, mM, mm). Atoms with
/// zero probability are dropped, and the probabilities sum to exactly 1.
std::vector<GainAtom> gain_distribution(const AntennaParams& antenna);

struct PathLoss {
  LinkState state;
  double value;
};

/// kappa_s r^alpha_s; throws std::domain_error for r <= 0.
PathLoss path_loss(double r, LinkState state, const ChannelParams& channel);

/// Unit-mean fading power: exponential for N = 1, Gamma(N, 1/N) otherwise.
template <class Rng>
double sample_fading(LinkState state, const ChannelParams& channel, Rng& rng) {
  const int n = channel.nakagami(state);
  if (n == 1) return std::exponential_distribution<double>(1.0)(rng);
  return std::gamma_distribution<double>(n, 1.0 / n)(rng);
}

/// Draws a gain from an atom list by inverse transform of u in [0, 1).
double pick_gain(const std::vector<GainAtom>& atoms, double u);

}  // namespace mmwcov
