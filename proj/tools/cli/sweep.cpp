#include "sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "mmwcov/association.hpp"
#include "mmwcov/errors.hpp"

namespace mmwcov::cli {

Method parse_method(const std::string& text) {
  if (text == "analytic") return Method::kAnalytic;
  if (text == "mc") return Method::kMonteCarlo;
  if (text == "both") return Method::kBoth;
  throw ConfigError("--method must be analytic, mc or both (got '" + text + "')");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kAnalytic:
      return "analytic";
    case Method::kMonteCarlo:
      return "mc";
    case Method::kBoth:
      return "both";
  }
  return "?";
}

namespace {

bool ends_with(const std::string& s, const std::string& tail) {
  return s.size() >= tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
}

int digit(char c, const std::string& name) {
  if (c < '0' || c > '9') throw ConfigError("unknown column '" + name + "'");
  return c - '0';
}

// "<i><j>[L|N]" after a prefix.
void parse_indices(const std::string& rest, const std::string& name, const NetworkScenario& scn,
                   Column& col, bool allow_state) {
  if (rest.size() < 2 || rest.size() > 3) throw ConfigError("unknown column '" + name + "'");
  const int i = digit(rest[0], name);
  const int j = digit(rest[1], name);
  if (i != scn.typical_ue_tier) {
    throw ConfigError("column '" + name + "': the typical UE tier is " +
                      std::to_string(scn.typical_ue_tier));
  }
  if (j > scn.tier_count()) {
    throw ConfigError("column '" + name + "': serving tier " + std::to_string(j) +
                      " exceeds the tier count");
  }
  col.tier = j;
  if (rest.size() == 3) {
    if (!allow_state) throw ConfigError("column '" + name + "' takes no link state");
    if (rest[2] == 'L') {
      col.state = LinkState::kLos;
    } else if (rest[2] == 'N') {
      col.state = LinkState::kNlos;
    } else {
      throw ConfigError("unknown column '" + name + "'");
    }
  }
}

}  // namespace

Column parse_column(const std::string& name, const NetworkScenario& scn) {
  Column col;
  col.name = name;
  std::string base = name;
  if (ends_with(base, "_mc_se")) {
    col.source = Source::kMonteCarloError;
    base.resize(base.size() - 6);
  } else if (ends_with(base, "_mc")) {
    col.source = Source::kMonteCarlo;
    base.resize(base.size() - 3);
  }

  static const std::map<std::string, Variant> kVariants = {
      {"PC", Variant::kQuery},
      {"PC_snr", Variant::kNoiseLimited},
      {"PC_sir", Variant::kInterferenceLimited},
      {"PC_center", Variant::kClusterCenter},
      {"PC_rayleigh", Variant::kRayleigh},
      {"PC_nakagami", Variant::kNakagami},
  };
  if (base == "Asum") {
    col.quantity = Quantity::kAssociationSum;
  } else if (auto it = kVariants.find(base); it != kVariants.end()) {
    col.quantity = Quantity::kCoverage;
    col.variant = it->second;
  } else if (base == "R") {
    col.quantity = Quantity::kSpectralEfficiency;
  } else if (base == "RATE") {
    col.quantity = Quantity::kRate;
  } else if (base.rfind("PCc", 0) == 0) {
    col.quantity = Quantity::kConditionalCoverage;
    parse_indices(base.substr(3), name, scn, col, true);
  } else if (base.rfind("PC", 0) == 0) {
    col.quantity = Quantity::kCoverage;
    parse_indices(base.substr(2), name, scn, col, true);
  } else if (base.rfind("A", 0) == 0) {
    col.quantity = Quantity::kAssociation;
    parse_indices(base.substr(1), name, scn, col, true);
  } else if (base.rfind("R", 0) == 0) {
    col.quantity = Quantity::kSpectralEfficiency;
    parse_indices(base.substr(1), name, scn, col, false);
    if (col.source != Source::kAnalytic) {
      throw ConfigError("column '" + name + "': the simulator estimates only the total R");
    }
  } else {
    throw ConfigError("unknown column '" + name + "'");
  }
  return col;
}

std::vector<std::string> expand_columns(const std::vector<std::string>& names, Method method) {
  std::vector<std::string> out;
  for (const auto& n : names) {
    if (ends_with(n, "_mc") || ends_with(n, "_mc_se") || method == Method::kAnalytic) {
      out.push_back(n);
      continue;
    }
    if (method == Method::kBoth) out.push_back(n);
    out.push_back(n + "_mc");
    out.push_back(n + "_mc_se");
  }
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", value);
  return buf;
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Point {
  std::string series;
  std::optional<double> value;
  NetworkScenario scenario;
  double threshold = 10.0;
  UeModel ue_model = UeModel::kClustered;
};

NetworkScenario apply_ratio_axis(NetworkScenario s, const std::string& axis, double db) {
  const int i = s.typical_ue_tier;
  const int last = s.tier_count();
  if (i == last) throw ConfigError(axis + " needs a tier other than the typical UE tier");
  const double ratio = units::db_to_linear(db);
  if (axis == kBiasRatioAxis) {
    s.tier(i).bias = ratio * s.tier(last).bias;
  } else {
    s.tier(i).tx_power = ratio * s.tier(last).tx_power;
  }
  return validate(std::move(s));
}

std::vector<Point> build_points(const SweepSpec& spec, const FlatConfig& base,
                                const EvalSettings& settings) {
  std::vector<Series> series = spec.series;
  if (series.empty()) series.push_back({});
  if (!spec.param.empty() && spec.values.empty()) throw ConfigError("--values must not be empty");
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw ConfigError("sweep values must be finite");
  }

  std::vector<Point> points;
  std::vector<std::string> errors;
  for (const auto& ser : series) {
    FlatConfig cfg = base;
    try {
      for (const auto& o : ser.overrides) apply_override(cfg, o);
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.violations().begin(), e.violations().end());
      continue;
    }
    const std::size_t count = spec.param.empty() ? 1 : spec.values.size();
    for (std::size_t n = 0; n < count; ++n) {
      Point p;
      p.series = ser.label;
      p.threshold = settings.query.threshold;
      p.ue_model = ser.ue_model.value_or(settings.mc.ue_model);
      try {
        FlatConfig point_cfg = cfg;
        if (!spec.param.empty()) {
          const double v = spec.values[n];
          p.value = v;
          if (spec.param == kThresholdAxis) {
            p.threshold = units::db_to_linear(v);
          } else if (spec.param != kBiasRatioAxis && spec.param != kPowerRatioAxis) {
            apply_override(point_cfg, spec.param + "=" + format_number(v));
          }
        }
        p.scenario = scenario_from_config(point_cfg);
        if (spec.param == kBiasRatioAxis || spec.param == kPowerRatioAxis) {
          p.scenario = apply_ratio_axis(p.scenario, spec.param, *p.value);
        }
        points.push_back(std::move(p));
      } catch (const ConfigError& e) {
        for (const auto& v : e.violations()) {
          const std::string where = p.value ? spec.param + "=" + format_number(*p.value) : "";
          errors.push_back(where.empty() ? v : where + ": " + v);
        }
      }
    }
  }
  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    errors.erase(std::unique(errors.begin(), errors.end()), errors.end());
    throw ConfigError(errors);
  }
  return points;
}

CoverageQuery variant_query(const CoverageQuery& q, Variant v, double threshold) {
  CoverageQuery out = q;
  out.threshold = threshold;
  switch (v) {
    case Variant::kQuery:
      break;
    case Variant::kNoiseLimited:
      out.mode = CoverageMode::kNoiseLimited;
      break;
    case Variant::kInterferenceLimited:
      out.mode = CoverageMode::kInterferenceLimited;
      break;
    case Variant::kClusterCenter:
      out.mode = CoverageMode::kClusterCenterOnly;
      break;
    case Variant::kRayleigh:
      out.fading = FadingModel::kRayleigh;
      break;
    case Variant::kNakagami:
      out.fading = FadingModel::kNakagami;
      break;
  }
  // Per-tier thresholds are relative to the query threshold.
  if (!q.tier_thresholds.empty() && q.threshold > 0.0) {
    for (auto& t : out.tier_thresholds) t *= threshold / q.threshold;
  }
  return out;
}

double joint_se(double p, long long n) {
  return n > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)) : 0.0;
}

// Lazily computed quantities of one sweep point.
class PointEvaluator {
 public:
  PointEvaluator(const Point& p, const EvalSettings& s) : p_(p), s_(s) {
    mc_ = s.mc;
    mc_.ue_model = p.ue_model;
  }

  double value(const Column& c) {
    switch (c.quantity) {
      case Quantity::kAssociation:
      case Quantity::kAssociationSum:
        return association(c);
      case Quantity::kCoverage:
      case Quantity::kConditionalCoverage:
        return coverage(c);
      case Quantity::kSpectralEfficiency:
      case Quantity::kRate:
        return rate(c);
    }
    return 0.0;
  }

 private:
  double association(const Column& c) {
    const int kk = p_.scenario.tier_count();
    if (c.source == Source::kAnalytic) {
      if (!model_) model_ = std::make_unique<AssociationModel>(p_.scenario);
      double out = 0.0;
      for (int j = 0; j <= kk; ++j) {
        if (c.tier >= 0 && j != c.tier) continue;
        for (LinkState s : kLinkStates) {
          if (c.state && *c.state != s) continue;
          out += model_->probability(j, s);
        }
      }
      return out;
    }
    if (!mc_assoc_) mc_assoc_ = estimate_association(p_.scenario, mc_);
    long long n = 0;
    double freq = 0.0;
    for (const auto& e : *mc_assoc_) {
      if (c.tier >= 0 && e.tier != c.tier) continue;
      if (c.state && *c.state != e.state) continue;
      freq += e.frequency.estimate;
      n = e.frequency.trials;
    }
    return c.source == Source::kMonteCarlo ? freq : joint_se(freq, n);
  }

  const CoverageResult& analytic_coverage(Variant v) {
    auto it = cov_.find(v);
    if (it == cov_.end()) {
      const CoverageQuery q = variant_query(s_.query, v, p_.threshold);
      it = cov_.emplace(v, network_coverage(p_.scenario, q)).first;
    }
    return it->second;
  }

  const CoverageResult& mc_coverage(Variant v) {
    auto it = mc_cov_.find(v);
    if (it == mc_cov_.end()) {
      const CoverageQuery q = variant_query(s_.query, v, p_.threshold);
      it = mc_cov_.emplace(v, estimate_coverage(p_.scenario, q, mc_)).first;
    }
    return it->second;
  }

  double coverage(const Column& c) {
    const CoverageResult& r =
        c.source == Source::kAnalytic ? analytic_coverage(c.variant) : mc_coverage(c.variant);
    const long long n = mc_.trials;
    if (c.quantity == Quantity::kCoverage && c.tier < 0) {
      return c.source == Source::kMonteCarloError ? r.standard_error : r.total;
    }
    double joint = 0.0;
    double assoc = 0.0;
    const EventCoverage* single = nullptr;
    for (const auto& e : r.per_event) {
      if (e.tier != c.tier) continue;
      if (c.state && *c.state != e.state) continue;
      joint += e.joint;
      assoc += e.association;
      single = &e;
    }
    if (c.quantity == Quantity::kCoverage) {
      return c.source == Source::kMonteCarloError ? joint_se(joint, n) : joint;
    }
    const double cond = assoc > 1e-14 ? joint / assoc : 0.0;
    if (c.source != Source::kMonteCarloError) return cond;
    if (c.state && single) return single->standard_error;
    const auto drops = static_cast<long long>(std::llround(assoc * static_cast<double>(n)));
    return joint_se(cond, drops);
  }

  double rate(const Column& c) {
    const double bandwidth = c.quantity == Quantity::kRate ? p_.scenario.bandwidth : 1.0;
    if (c.source == Source::kAnalytic) {
      if (!se_) {
        se_ = spectral_efficiency(p_.scenario, variant_query(s_.query, Variant::kQuery, p_.threshold));
      }
      if (c.tier < 0) return se_->total * bandwidth;
      double out = 0.0;
      for (const auto& e : se_->per_event) {
        if (e.tier == c.tier && (!c.state || *c.state == e.state)) out += e.joint;
      }
      return out * bandwidth;
    }
    if (!mc_rate_) {
      mc_rate_ = estimate_rate(p_.scenario, variant_query(s_.query, Variant::kQuery, p_.threshold), mc_);
    }
    const auto& est = mc_rate_->spectral_efficiency;
    return (c.source == Source::kMonteCarlo ? est.estimate : est.standard_error) * bandwidth;
  }

  const Point& p_;
  const EvalSettings& s_;
  MonteCarloOptions mc_;
  std::unique_ptr<AssociationModel> model_;
  std::map<Variant, CoverageResult> cov_;
  std::map<Variant, CoverageResult> mc_cov_;
  std::optional<SpectralEfficiency> se_;
  std::optional<std::vector<EventEstimate>> mc_assoc_;
  std::optional<RateEstimate> mc_rate_;
};

}  // namespace

Table run_sweep(const SweepSpec& spec, const FlatConfig& base, const EvalSettings& settings) {
  const auto points = build_points(spec, base, settings);
  const auto names = expand_columns(spec.columns, settings.method);
  if (names.empty()) throw ConfigError("no output columns requested");

  // Validate every column against every point before computing anything.
  std::vector<std::vector<Column>> columns;
  {
    std::vector<std::string> errors;
    for (const auto& p : points) {
      std::vector<Column> cols;
      for (const auto& n : names) {
        try {
          cols.push_back(parse_column(n, p.scenario));
        } catch (const ConfigError& e) {
          errors.insert(errors.end(), e.violations().begin(), e.violations().end());
        }
      }
      columns.push_back(std::move(cols));
    }
    if (!errors.empty()) {
      std::sort(errors.begin(), errors.end());
      errors.erase(std::unique(errors.begin(), errors.end()), errors.end());
      throw ConfigError(errors);
    }
  }

  Table table;
  const bool has_series = !spec.series.empty();
  if (has_series) table.header.push_back("series");
  if (!spec.param.empty()) table.header.push_back(spec.param);
  table.header.insert(table.header.end(), names.begin(), names.end());
  table.rows.resize(points.size());

  auto evaluate = [&](std::size_t n) {
    const Point& p = points[n];
    PointEvaluator ev(p, settings);
    auto& row = table.rows[n];
    if (has_series) row.push_back(p.series);
    if (p.value) row.push_back(format_number(*p.value));
    for (const auto& c : columns[n]) row.push_back(format_number(ev.value(c)));
  };

  // Analytic points run concurrently; simulation points are already parallel inside.
  const bool concurrent = settings.method == Method::kAnalytic && points.size() > 1;
  const int workers = concurrent
                          ? std::min<int>(settings.mc.threads > 0 ? settings.mc.threads
                                                                  : default_thread_count(),
                                          static_cast<int>(points.size()))
                          : 1;
  std::vector<std::exception_ptr> failures(points.size());
  if (workers <= 1) {
    for (std::size_t n = 0; n < points.size(); ++n) evaluate(n);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t n = static_cast<std::size_t>(w); n < points.size();
             n += static_cast<std::size_t>(workers)) {
          try {
            evaluate(n);
          } catch (...) {
            failures[n] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    for (const auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }
  return table;
}

void write_csv(std::ostream& out, const Table& table) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t n = 0; n < fields.size(); ++n) {
      if (n) out << ',';
      out << quote(fields[n]);
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

}  // namespace mmwcov::cli
