#pragma once

// Sweep engine behind the command-line front end: a column registry, sweep
// specifications and their evaluation into CSV rows.
//
// Column names (typical tier i, serving tier j in 0..K, state s in {L, N}):
//   A<i><j>, A<i><j><s>     association probability (summed over s / per state)
//   Asum                    sum of all association probabilities
//   PC                      total coverage under the query's mode and fading
//   PC<i><j>, PC<i><j><s>   joint coverage P^c A of a serving tier / event
//   PCc<i><j><s>            conditional coverage of an event
//   PC_snr, PC_sir          total coverage without interference / without noise
//   PC_center               coverage when forced onto the cluster center
//   PC_rayleigh, PC_nakagami  total coverage under a fixed fading model
//   R, R<i><j>              spectral efficiency (bits/s/Hz), total / per tier
//   RATE                    R times the bandwidth (bit/s)
// Every column has Monte Carlo twins <name>_mc and <name>_mc_se.

#include <optional>
#include <string>
#include <vector>

#include "mmwcov/config.hpp"
#include "mmwcov/coverage.hpp"
#include "mmwcov/montecarlo.hpp"

namespace mmwcov::cli {

enum class Method { kAnalytic, kMonteCarlo, kBoth };

Method parse_method(const std::string& text);
std::string to_string(Method method);

enum class Source { kAnalytic, kMonteCarlo, kMonteCarloError };

enum class Quantity {
  kAssociation,
  kAssociationSum,
  kCoverage,             // joint (or total when tier < 0)
  kConditionalCoverage,
  kSpectralEfficiency,
  kRate,
};

enum class Variant { kQuery, kNoiseLimited, kInterferenceLimited, kClusterCenter, kRayleigh, kNakagami };

struct Column {
  std::string name;
  Quantity quantity = Quantity::kAssociation;
  Variant variant = Variant::kQuery;
  int tier = -1;                    // -1: total over tiers
  std::optional<LinkState> state;   // empty: summed over states
  Source source = Source::kAnalytic;
};

/// Parses a registry name (with optional _mc / _mc_se suffix). Throws
/// ConfigError for unknown names or tiers outside 0..K.
Column parse_column(const std::string& name, const NetworkScenario& scenario);

/// Expands base names according to the method: analytic keeps them, mc
/// swaps in the _mc and _mc_se twins, both keeps all three.
std::vector<std::string> expand_columns(const std::vector<std::string>& names, Method method);

/// Threshold axis (dB) and the two ratio axes; any other axis is a config path.
inline constexpr const char* kThresholdAxis = "threshold_db";
inline constexpr const char* kBiasRatioAxis = "bias_ratio_db";    // B_i / B_K in dB
inline constexpr const char* kPowerRatioAxis = "power_ratio_db";  // P_i / P_K in dB

struct Series {
  std::string label;
  std::vector<std::string> overrides;  // path=value, applied before the axis
  std::optional<UeModel> ue_model;     // Monte Carlo UE placement for this series
};

struct SweepSpec {
  std::string name = "sweep";
  std::string param;  // empty: a single point
  std::vector<double> values;
  std::vector<std::string> columns;  // base names
  std::vector<Series> series;        // empty: one unnamed series
  std::string description;
};

struct EvalSettings {
  Method method = Method::kAnalytic;
  CoverageQuery query;  // threshold is linear
  MonteCarloOptions mc;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Evaluates every point of the sweep. All scenarios and columns are
/// validated before any computation starts.
Table run_sweep(const SweepSpec& spec, const FlatConfig& base, const EvalSettings& settings);

/// RFC 4180 CSV of the table. Numbers print with %.10g in the C locale.
std::string format_number(double value);
void write_csv(std::ostream& out, const Table& table);

/// Named presets fig3 ... fig11, in a stable order.
std::vector<SweepSpec> figure_presets();
const SweepSpec& find_preset(const std::string& name);

}  // namespace mmwcov::cli
