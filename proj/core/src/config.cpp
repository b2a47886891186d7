#include "mmwcov/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <regex>
#include <set>
#include <sstream>
#include <utility>

#include "mmwcov/errors.hpp"

namespace mmwcov {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct UnitRule {
  std::string_view unit;
  double scale;
  bool decibel;  // value is 10 log10 of the base quantity times scale
};

const std::vector<UnitRule>& unit_rules(Quantity kind) {
  static const std::vector<UnitRule> power{
      {"", 1.0, false}, {"W", 1.0, false}, {"mW", 1e-3, false}, {"dBm", 1e-3, true}, {"dBW", 1.0, true}};
  static const std::vector<UnitRule> gain{{"", 1.0, false}, {"dB", 1.0, true}};
  static const std::vector<UnitRule> angle{
      {"", 1.0, false}, {"rad", 1.0, false}, {"deg", std::numbers::pi / 180.0, false}};
  static const std::vector<UnitRule> length{{"", 1.0, false}, {"m", 1.0, false}, {"km", 1e3, false}};
  static const std::vector<UnitRule> inverse_length{
      {"", 1.0, false}, {"1/m", 1.0, false}, {"/m", 1.0, false}, {"1/km", 1e-3, false}, {"/km", 1e-3, false}};
  static const std::vector<UnitRule> density{
      {"", 1.0, false},      {"1/m2", 1.0, false},  {"/m2", 1.0, false},
      {"1/m^2", 1.0, false}, {"/m^2", 1.0, false},  {"1/km2", 1e-6, false},
      {"/km2", 1e-6, false}, {"1/km^2", 1e-6, false}, {"/km^2", 1e-6, false}};
  static const std::vector<UnitRule> frequency{
      {"", 1.0, false}, {"Hz", 1.0, false}, {"kHz", 1e3, false}, {"MHz", 1e6, false}, {"GHz", 1e9, false}};
  static const std::vector<UnitRule> plain{{"", 1.0, false}};
  switch (kind) {
    case Quantity::kPower: return power;
    case Quantity::kGain: return gain;
    case Quantity::kAngle: return angle;
    case Quantity::kLength: return length;
    case Quantity::kInverseLength: return inverse_length;
    case Quantity::kDensity: return density;
    case Quantity::kFrequency: return frequency;
    case Quantity::kPlain: return plain;
  }
  return plain;
}

// ---- schema ---------------------------------------------------------------

enum class Kind { kNumber, kInteger, kBool, kMode };

using TopSetter = void (*)(NetworkScenario&, double);
using TierSetter = void (*)(TierParams&, double);

struct TopField {
  std::string_view key;
  Kind kind;
  Quantity quantity;
  bool required;
  TopSetter set;
};

struct TierField {
  std::string_view key;
  Kind kind;
  Quantity quantity;
  bool required;
  TierSetter set;
};

const std::vector<TopField>& top_fields() {
  using S = NetworkScenario;
  using Q = Quantity;
  static const std::vector<TopField> fields{
      {"ue_tx_power", Kind::kNumber, Q::kPower, true, [](S& s, double v) { s.ue_tx_power = v; }},
      {"noise_power", Kind::kNumber, Q::kPower, true, [](S& s, double v) { s.noise_power = v; }},
      {"ue_density", Kind::kNumber, Q::kDensity, true, [](S& s, double v) { s.ue_density = v; }},
      {"typical_ue_tier", Kind::kInteger, Q::kPlain, false,
       [](S& s, double v) { s.typical_ue_tier = static_cast<int>(v); }},
      {"power_control_tau", Kind::kNumber, Q::kPlain, false,
       [](S& s, double v) { s.power_control_tau = v; }},
      {"power_control_mode", Kind::kMode, Q::kPlain, false,
       [](S& s, double v) {
         s.power_control_mode = v == 0.0 ? PowerControlMode::kPathLoss : PowerControlMode::kDistance;
       }},
      {"center_bias", Kind::kNumber, Q::kGain, false, [](S& s, double v) { s.center_bias = v; }},
      {"bandwidth", Kind::kNumber, Q::kFrequency, false, [](S& s, double v) { s.bandwidth = v; }},
      {"channel.alpha_los", Kind::kNumber, Q::kPlain, true,
       [](S& s, double v) { s.channel.alpha_los = v; }},
      {"channel.alpha_nlos", Kind::kNumber, Q::kPlain, true,
       [](S& s, double v) { s.channel.alpha_nlos = v; }},
      {"channel.kappa_los", Kind::kNumber, Q::kGain, true,
       [](S& s, double v) { s.channel.kappa_los = v; }},
      {"channel.kappa_nlos", Kind::kNumber, Q::kGain, true,
       [](S& s, double v) { s.channel.kappa_nlos = v; }},
      {"channel.blockage_epsilon", Kind::kNumber, Q::kInverseLength, true,
       [](S& s, double v) { s.channel.blockage_epsilon = v; }},
      {"channel.nakagami_los", Kind::kInteger, Q::kPlain, false,
       [](S& s, double v) { s.channel.nakagami_los = static_cast<int>(v); }},
      {"channel.nakagami_nlos", Kind::kInteger, Q::kPlain, false,
       [](S& s, double v) { s.channel.nakagami_nlos = static_cast<int>(v); }},
      {"antenna.main_lobe_bs", Kind::kNumber, Q::kGain, true,
       [](S& s, double v) { s.antenna.main_lobe_bs = v; }},
      {"antenna.side_lobe_bs", Kind::kNumber, Q::kGain, true,
       [](S& s, double v) { s.antenna.side_lobe_bs = v; }},
      {"antenna.main_lobe_ue", Kind::kNumber, Q::kGain, true,
       [](S& s, double v) { s.antenna.main_lobe_ue = v; }},
      {"antenna.side_lobe_ue", Kind::kNumber, Q::kGain, true,
       [](S& s, double v) { s.antenna.side_lobe_ue = v; }},
      {"antenna.beamwidth_bs", Kind::kNumber, Q::kAngle, true,
       [](S& s, double v) { s.antenna.beamwidth_bs = v; }},
      {"antenna.beamwidth_ue", Kind::kNumber, Q::kAngle, true,
       [](S& s, double v) { s.antenna.beamwidth_ue = v; }},
  };
  return fields;
}

const std::vector<TierField>& tier_fields() {
  using T = TierParams;
  using Q = Quantity;
  static const std::vector<TierField> fields{
      {"density", Kind::kNumber, Q::kDensity, true, [](T& t, double v) { t.density = v; }},
      {"tx_power", Kind::kNumber, Q::kPower, true, [](T& t, double v) { t.tx_power = v; }},
      {"bias", Kind::kNumber, Q::kGain, false, [](T& t, double v) { t.bias = v; }},
      {"hosts_clusters", Kind::kBool, Q::kPlain, false,
       [](T& t, double v) { t.hosts_clusters = v != 0.0; }},
      {"cluster_sigma", Kind::kNumber, Q::kLength, false,
       [](T& t, double v) { t.cluster_sigma = v; }},
  };
  return fields;
}

double parse_integer(std::string_view text, const std::string& path) {
  text = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError(path + ": expected an integer, got '" + std::string(text) + "'");
  }
  return static_cast<double>(v);
}

double parse_bool(std::string_view text, const std::string& path) {
  text = trim(text);
  if (text == "true" || text == "yes" || text == "on" || text == "1") return 1.0;
  if (text == "false" || text == "no" || text == "off" || text == "0") return 0.0;
  throw ConfigError(path + ": expected true or false, got '" + std::string(text) + "'");
}

double parse_mode(std::string_view text, const std::string& path) {
  text = trim(text);
  if (text == "path_loss") return 0.0;
  if (text == "distance") return 1.0;
  throw ConfigError(path + ": expected path_loss or distance, got '" + std::string(text) + "'");
}

double parse_field(Kind kind, Quantity q, std::string_view text, const std::string& path) {
  switch (kind) {
    case Kind::kNumber: return parse_quantity(text, q, path);
    case Kind::kInteger: return parse_integer(text, path);
    case Kind::kBool: return parse_bool(text, path);
    case Kind::kMode: return parse_mode(text, path);
  }
  return 0.0;
}

void flatten_node(const YAML::Node& node, const std::string& path, FlatConfig& out,
                  std::vector<std::string>& errors) {
  switch (node.Type()) {
    case YAML::NodeType::Map:
      for (const auto& kv : node) {
        const auto key = kv.first.as<std::string>();
        flatten_node(kv.second, path.empty() ? key : path + "." + key, out, errors);
      }
      break;
    case YAML::NodeType::Sequence:
      for (std::size_t i = 0; i < node.size(); ++i) {
        flatten_node(node[i], path + "[" + std::to_string(i) + "]", out, errors);
      }
      break;
    case YAML::NodeType::Scalar:
      out[path] = node.Scalar();
      break;
    default:
      errors.push_back((path.empty() ? std::string("<root>") : path) + ": missing value");
      break;
  }
}

bool is_tier_path(const std::string& path) { return path.rfind("tiers[", 0) == 0; }

}  // namespace

double parse_quantity(std::string_view text, Quantity kind, const std::string& path) {
  const auto original = std::string(text);
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double number = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), number);
  if (ec != std::errc{} || !std::isfinite(number)) {
    throw ConfigError(path + ": expected a number, got '" + original + "'");
  }
  const auto unit = trim(std::string_view(ptr, static_cast<std::size_t>(text.data() + text.size() - ptr)));
  for (const auto& rule : unit_rules(kind)) {
    if (rule.unit == unit) {
      return rule.decibel ? rule.scale * std::pow(10.0, number / 10.0) : rule.scale * number;
    }
  }
  throw ConfigError(path + ": unsupported unit '" + std::string(unit) + "'");
}

FlatConfig parse_config_text(std::string_view yaml, std::string_view origin) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string(origin) + ": " + e.what());
  }
  FlatConfig out;
  if (root.IsNull()) return out;
  if (!root.IsMap()) throw ConfigError(std::string(origin) + ": top level must be a mapping");
  std::vector<std::string> errors;
  flatten_node(root, "", out, errors);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return out;
}

FlatConfig read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path.string());
}

FlatConfig default_config() { return flatten(reference_scenario()); }

void merge_config(FlatConfig& base, const FlatConfig& overlay) {
  bool overlay_has_tiers = false;
  for (const auto& [k, v] : overlay) overlay_has_tiers = overlay_has_tiers || is_tier_path(k);
  if (overlay_has_tiers) std::erase_if(base, [](const auto& kv) { return is_tier_path(kv.first); });
  for (const auto& [k, v] : overlay) base[k] = v;
}

void apply_override(FlatConfig& config, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form path=value");
  }
  const auto key = trim(assignment.substr(0, eq));
  const auto value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError("override '" + std::string(assignment) + "' has an empty path");
  config[std::string(key)] = std::string(value);
}

NetworkScenario scenario_from_config(const FlatConfig& config) {
  static const std::regex tier_re(R"(tiers\[(\d+)\]\.([A-Za-z_]+))");
  std::vector<std::string> errors;
  NetworkScenario s;
  std::set<std::string> seen;
  std::map<int, std::map<std::string, std::string>> tier_values;

  for (const auto& [path, text] : config) {
    std::smatch m;
    if (std::regex_match(path, m, tier_re)) {
      tier_values[std::stoi(m[1].str())][m[2].str()] = text;
      continue;
    }
    bool known = false;
    for (const auto& f : top_fields()) {
      if (f.key != path) continue;
      known = true;
      seen.insert(path);
      try {
        f.set(s, parse_field(f.kind, f.quantity, text, path));
      } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
      }
    }
    if (!known) errors.push_back(path + ": unknown key");
  }
  for (const auto& f : top_fields()) {
    if (f.required && !seen.contains(std::string(f.key))) {
      errors.push_back(std::string(f.key) + ": required field is missing");
    }
  }

  int expected = 0;
  for (const auto& [index, values] : tier_values) {
    if (index != expected) {
      errors.push_back("tiers[" + std::to_string(expected) + "]: tier indices must be contiguous from 0");
      break;
    }
    ++expected;
    TierParams t;
    const std::string prefix = "tiers[" + std::to_string(index) + "].";
    for (const auto& [key, text] : values) {
      const TierField* field = nullptr;
      for (const auto& f : tier_fields()) {
        if (f.key == key) field = &f;
      }
      if (field == nullptr) {
        errors.push_back(prefix + key + ": unknown key");
        continue;
      }
      try {
        field->set(t, parse_field(field->kind, field->quantity, text, prefix + key));
      } catch (const ConfigError& e) {
        errors.insert(errors.end(), e.violations().begin(), e.violations().end());
      }
    }
    for (const auto& f : tier_fields()) {
      if (f.required && !values.contains(std::string(f.key))) {
        errors.push_back(prefix + std::string(f.key) + ": required field is missing");
      }
    }
    s.tiers.push_back(t);
  }

  if (errors.empty()) {
    auto violations = invariant_violations(s);
    errors.insert(errors.end(), violations.begin(), violations.end());
  }
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return s;
}

FlatConfig flatten(const NetworkScenario& s) {
  FlatConfig out;
  out["ue_tx_power"] = format_double(s.ue_tx_power);
  out["noise_power"] = format_double(s.noise_power);
  out["ue_density"] = format_double(s.ue_density);
  out["typical_ue_tier"] = std::to_string(s.typical_ue_tier);
  out["power_control_tau"] = format_double(s.power_control_tau);
  out["power_control_mode"] =
      s.power_control_mode == PowerControlMode::kPathLoss ? "path_loss" : "distance";
  if (s.center_bias) out["center_bias"] = format_double(*s.center_bias);
  out["bandwidth"] = format_double(s.bandwidth);

  const auto& c = s.channel;
  out["channel.alpha_los"] = format_double(c.alpha_los);
  out["channel.alpha_nlos"] = format_double(c.alpha_nlos);
  out["channel.kappa_los"] = format_double(c.kappa_los);
  out["channel.kappa_nlos"] = format_double(c.kappa_nlos);
  out["channel.blockage_epsilon"] = format_double(c.blockage_epsilon);
  out["channel.nakagami_los"] = std::to_string(c.nakagami_los);
  out["channel.nakagami_nlos"] = std::to_string(c.nakagami_nlos);

  const auto& a = s.antenna;
  out["antenna.main_lobe_bs"] = format_double(a.main_lobe_bs);
  out["antenna.side_lobe_bs"] = format_double(a.side_lobe_bs);
  out["antenna.main_lobe_ue"] = format_double(a.main_lobe_ue);
  out["antenna.side_lobe_ue"] = format_double(a.side_lobe_ue);
  out["antenna.beamwidth_bs"] = format_double(a.beamwidth_bs);
  out["antenna.beamwidth_ue"] = format_double(a.beamwidth_ue);

  for (std::size_t i = 0; i < s.tiers.size(); ++i) {
    const auto& t = s.tiers[i];
    const std::string p = "tiers[" + std::to_string(i) + "].";
    out[p + "density"] = format_double(t.density);
    out[p + "tx_power"] = format_double(t.tx_power);
    out[p + "bias"] = format_double(t.bias);
    out[p + "hosts_clusters"] = t.hosts_clusters ? "true" : "false";
    if (t.cluster_sigma) out[p + "cluster_sigma"] = format_double(*t.cluster_sigma);
  }
  return out;
}

std::string serialize(const NetworkScenario& scenario) {
  const auto flat = flatten(scenario);
  std::ostringstream top;
  std::map<std::string, std::ostringstream> sections;
  std::map<int, std::ostringstream> tiers;
  static const std::regex tier_re(R"(tiers\[(\d+)\]\.([A-Za-z_]+))");
  for (const auto& [path, value] : flat) {
    std::smatch m;
    if (std::regex_match(path, m, tier_re)) {
      auto& os = tiers[std::stoi(m[1].str())];
      os << (os.tellp() == 0 ? "  - " : "    ") << m[2].str() << ": " << value << "\n";
      continue;
    }
    const auto dot = path.find('.');
    if (dot == std::string::npos) {
      top << path << ": " << value << "\n";
    } else {
      sections[path.substr(0, dot)] << "  " << path.substr(dot + 1) << ": " << value << "\n";
    }
  }
  std::string out = top.str();
  for (const auto& [name, body] : sections) out += name + ":\n" + body.str();
  out += "tiers:\n";
  for (const auto& [index, body] : tiers) out += body.str();
  return out;
}

NetworkScenario load_scenario(const std::optional<std::filesystem::path>& file,
                              const std::vector<std::string>& overrides) {
  auto config = default_config();
  if (file) merge_config(config, read_config_file(*file));
  for (const auto& o : overrides) apply_override(config, o);
  return scenario_from_config(config);
}

}  // namespace mmwcov
