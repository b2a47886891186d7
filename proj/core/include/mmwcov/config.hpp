#pragma once

// Scenario configuration files.
//
// A configuration is a YAML document with top-level scalars, `channel` and
// `antenna` maps and a `tiers` list. Internally it is handled as a flat map
// from field paths (`noise_power`, `channel.blockage_epsilon`,
// `tiers[0].cluster_sigma`) to raw scalar text, which is also the syntax of
// command-line overrides. Units are only understood here; see
// docs in README for the accepted suffixes.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mmwcov/scenario.hpp"

namespace mmwcov {

using FlatConfig = std::map<std::string, std::string>;

enum class Quantity {
  kPower,          // W (default), mW, dBm, dBW
  kGain,           // linear (default), dB
  kAngle,          // rad (default), deg
  kLength,         // m (default), km
  kInverseLength,  // 1/m (default), 1/km
  kDensity,        // 1/m^2 (default), 1/km^2
  kFrequency,      // Hz (default), kHz, MHz, GHz
  kPlain,          // no unit
};

/// Parses "<number> [unit]" into base units. Throws ConfigError naming `path`.
double parse_quantity(std::string_view text, Quantity kind, const std::string& path);

/// Flattens a YAML document. Throws ConfigError on syntax errors or on
/// structures that are not scalars, maps or the tier list.
FlatConfig parse_config_text(std::string_view yaml, std::string_view origin = "<text>");
FlatConfig read_config_file(const std::filesystem::path& path);

/// The reference scenario as a flat configuration.
FlatConfig default_config();

/// Overlays `overlay` on `base`. If the overlay names any tier field, the
/// base tier list is discarded first so a file fully defines its tiers.
void merge_config(FlatConfig& base, const FlatConfig& overlay);

/// Applies one `path=value` assignment. Tier paths address individual fields,
/// so an override never drops other tiers.
void apply_override(FlatConfig& config, std::string_view assignment);

/// Converts and validates; every unknown key, malformed value and invariant
/// violation is reported together in one ConfigError.
NetworkScenario scenario_from_config(const FlatConfig& config);

/// Canonical flat form in base units, printed with round-trip precision.
FlatConfig flatten(const NetworkScenario& scenario);

/// YAML text that loads back to an identical scenario.
std::string serialize(const NetworkScenario& scenario);

/// Default document, then the file (if any), then overrides left to right.
NetworkScenario load_scenario(const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides);

}  // namespace mmwcov
