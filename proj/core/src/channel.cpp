#include "mmwcov/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmwcov {

std::vector<GainAtom> gain_distribution(const AntennaParams& a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double qb = std::min(a.beamwidth_bs / kTwoPi, 1.0);
  const double qu = std::min(a.beamwidth_ue / kTwoPi, 1.0);
  const double p_mm_main = qb * qu;
  const double p_main_side = qb * (1.0 - qu);
  const double p_side_main = (1.0 - qb) * qu;
  // Taking the last atom as the complement makes the left-to-right sum exactly 1.
  const double p_side_side = 1.0 - (p_mm_main + p_main_side + p_side_main);

  const std::vector<GainAtom> all{
      {a.main_lobe_bs * a.main_lobe_ue, p_mm_main},
      {a.main_lobe_bs * a.side_lobe_ue, p_main_side},
      {a.side_lobe_bs * a.main_lobe_ue, p_side_main},
      {a.side_lobe_bs * a.side_lobe_ue, p_side_side},
  };
  std::vector<GainAtom> out;
  for (const auto& atom : all) {
    if (atom.probability > 0.0) out.push_back(atom);
  }
  return out;
}

PathLoss path_loss(double r, LinkState state, const ChannelParams& channel) {
  if (!(r > 0.0)) throw std::domain_error("path_loss: distance must be positive");
  return {state, channel.kappa(state) * std::pow(r, channel.alpha(state))};
}

double pick_gain(const std::vector<GainAtom>& atoms, double u) {
  double acc = 0.0;
  for (const auto& atom : atoms) {
    acc += atom.probability;
    if (u < acc) return atom.gain;
  }
  return atoms.back().gain;
}

}  // namespace mmwcov
