#include <stdexcept>

#include "mmwcov/errors.hpp"
#include "sweep.hpp"

namespace mmwcov::cli {

namespace {

const std::vector<double> kSigmas = {10, 15, 20, 25, 30, 40, 50, 60};
const std::vector<double> kThresholdsDb = {-10, -5, 0, 5, 10, 15, 20, 25, 30};

// Tier 2 becomes a second small-cell tier without clusters; the macro tier moves to 3.
const std::vector<std::string> kThreeTier = {
    "tiers[1].density=1e-5",   "tiers[1].tx_power=30 dBm",   "tiers[1].bias=1",
    "tiers[1].hosts_clusters=false", "tiers[2].density=1e-5", "tiers[2].tx_power=46 dBm",
    "tiers[2].bias=1"};

std::vector<SweepSpec> build() {
  std::vector<SweepSpec> out;

  SweepSpec fig3;
  fig3.name = "fig3";
  fig3.description = "association and coverage per serving tier against the cluster spread, T = 10 dB";
  fig3.param = "tiers[0].cluster_sigma";
  fig3.values = kSigmas;
  fig3.columns = {"A10", "A11", "A12", "PC", "PC10", "PC11", "PC12"};
  out.push_back(fig3);

  SweepSpec fig4;
  fig4.name = "fig4";
  fig4.description = "fig3 in a three-tier network (extra unclustered small-cell tier)";
  fig4.param = "tiers[0].cluster_sigma";
  fig4.values = kSigmas;
  fig4.columns = {"A10", "A11", "A12", "A13", "PC", "PC10", "PC11", "PC12", "PC13"};
  fig4.series = {{"three_tier", kThreeTier, std::nullopt}};
  out.push_back(fig4);

  SweepSpec fig5;
  fig5.name = "fig5";
  fig5.description =
      "coverage against the threshold for sigma = 25, a wide-cluster proxy (500 m) and "
      "uniformly placed UEs, with and without interference";
  fig5.param = kThresholdAxis;
  fig5.values = kThresholdsDb;
  fig5.columns = {"PC", "PC_snr", "PC11", "PC12"};
  fig5.series = {{"sigma=25", {"tiers[0].cluster_sigma=25"}, std::nullopt},
                 {"sigma=500", {"tiers[0].cluster_sigma=500"}, std::nullopt},
                 {"uniform", {"tiers[0].cluster_sigma=500"}, UeModel::kUniform}};
  out.push_back(fig5);

  SweepSpec fig6;
  fig6.name = "fig6";
  fig6.description = "SINR and SNR coverage against the threshold, without and with power control";
  fig6.param = kThresholdAxis;
  fig6.values = kThresholdsDb;
  fig6.columns = {"PC", "PC_snr"};
  for (const char* sigma : {"10", "25", "50"}) {
    for (const char* tau : {"0", "0.5"}) {
      fig6.series.push_back({std::string("sigma=") + sigma + ";tau=" + tau,
                             {std::string("tiers[0].cluster_sigma=") + sigma,
                              std::string("power_control_tau=") + tau},
                             std::nullopt});
    }
  }
  out.push_back(fig6);

  SweepSpec fig7;
  fig7.name = "fig7";
  fig7.description = "Rayleigh against Nakagami (N_L = 3, N_N = 2) coverage against the threshold";
  fig7.param = kThresholdAxis;
  fig7.values = kThresholdsDb;
  fig7.columns = {"PC_rayleigh", "PC_nakagami", "PC_snr"};
  for (const char* sigma : {"25", "50"}) {
    fig7.series.push_back({std::string("sigma=") + sigma,
                           {std::string("tiers[0].cluster_sigma=") + sigma,
                            "channel.nakagami_los=3", "channel.nakagami_nlos=2"},
                           std::nullopt});
  }
  out.push_back(fig7);

  SweepSpec fig8;
  fig8.name = "fig8";
  fig8.description = "per-event association and coverage against the blockage exponent, T = 10 dB";
  fig8.param = "channel.blockage_epsilon";
  fig8.values = {0.0, 0.001, 0.003, 0.005, 0.007, 0.01, 0.02, 0.03, 0.05};
  fig8.columns = {"A10L", "A10N", "A11L", "A11N", "A12L", "A12N",
                  "PC10L", "PC10N", "PC11L", "PC11N", "PC12L", "PC12N", "PC"};
  out.push_back(fig8);

  SweepSpec fig9;
  fig9.name = "fig9";
  fig9.description = "association against the small-cell to macro bias ratio B1/B2 (dB)";
  fig9.param = kBiasRatioAxis;
  fig9.values = {0, 5, 10, 15, 20};
  fig9.columns = {"A10", "A11", "A12"};
  out.push_back(fig9);

  SweepSpec fig9p;
  fig9p.name = "fig9_power";
  fig9p.description = "association against the small-cell to macro power ratio P1/P2 (dB)";
  fig9p.param = kPowerRatioAxis;
  fig9p.values = {-20, -16, -12, -8, -4, 0};
  fig9p.columns = {"A10", "A11", "A12"};
  out.push_back(fig9p);

  SweepSpec fig10;
  fig10.name = "fig10";
  fig10.description = "conditional and joint coverage per tier against B1/B2 (dB), T = 10 dB";
  fig10.param = kBiasRatioAxis;
  fig10.values = {0, 5, 10, 15, 20};
  fig10.columns = {"PCc10L", "PCc11L", "PCc12L", "PC10", "PC11", "PC12", "PC"};
  out.push_back(fig10);

  SweepSpec fig11;
  fig11.name = "fig11";
  fig11.description = "association and coverage against the small-cell density, T = 10 dB";
  fig11.param = "tiers[0].density";
  fig11.values = {1e-5, 2e-5, 5e-5, 1e-4, 2e-4, 5e-4, 1e-3};
  fig11.columns = {"A10", "A11", "A12", "PC10", "PC11", "PC12", "PC"};
  out.push_back(fig11);

  return out;
}

}  // namespace

std::vector<SweepSpec> figure_presets() {
  static const std::vector<SweepSpec> presets = build();
  return presets;
}

const SweepSpec& find_preset(const std::string& name) {
  static const std::vector<SweepSpec> presets = build();
  for (const auto& p : presets) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : presets) known += (known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

}  // namespace mmwcov::cli
