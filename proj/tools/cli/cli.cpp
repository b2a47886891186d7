#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "mmwcov/association.hpp"
#include "mmwcov/config.hpp"
#include "mmwcov/coverage.hpp"
#include "mmwcov/errors.hpp"
#include "mmwcov/montecarlo.hpp"
#include "sweep.hpp"

namespace mmwcov::cli {

namespace {

struct Options {
  std::string config;
  std::vector<std::string> overrides;
  std::string method = "analytic";
  long long trials = 100000;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::vector<double> thresholds_db;
  std::string mode = "full";
  std::string fading = "rayleigh";
  std::string nakagami_form = "exact";
  std::string ue_model = "clustered";
  std::vector<std::string> columns;
  // sweep
  std::string param;
  std::vector<double> values;
  std::string preset;
  bool list_presets = false;
  // mc
  std::string dump;
  long long dump_count = 10;
};

void add_common(CLI::App* sub, Options& o, bool with_method) {
  sub->add_option("--config", o.config, "YAML scenario file")->check(CLI::ExistingFile);
  sub->add_option("--set", o.overrides, "path=value override, applied left to right")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  if (with_method) {
    sub->add_option("--method", o.method, "analytic, mc or both")
        ->check(CLI::IsMember({"analytic", "mc", "both"}));
  }
  sub->add_option("--trials", o.trials, "Monte Carlo drops")->check(CLI::Range(1000LL, 1LL << 40));
  sub->add_option("--seed", o.seed, "Monte Carlo seed");
  sub->add_option("--threads", o.threads, "worker threads (0: MMWCOV_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--out", o.out, "write the CSV here instead of stdout");
  sub->add_option("--threshold-db", o.thresholds_db, "SINR thresholds in dB")->delimiter(',');
  sub->add_option("--mode", o.mode, "full, snr, sir or center")
      ->check(CLI::IsMember({"full", "snr", "sir", "center"}));
  sub->add_option("--fading", o.fading, "rayleigh or nakagami")
      ->check(CLI::IsMember({"rayleigh", "nakagami"}));
  sub->add_option("--nakagami-form", o.nakagami_form, "exact, scaled or literal")
      ->check(CLI::IsMember({"exact", "scaled", "literal"}));
  sub->add_option("--ue-model", o.ue_model, "Monte Carlo UE placement: clustered or uniform")
      ->check(CLI::IsMember({"clustered", "uniform"}));
  sub->add_option("--columns", o.columns, "output columns (see README)")->delimiter(',');
}

CoverageQuery make_query(const Options& o) {
  CoverageQuery q;
  q.threshold = units::db_to_linear(o.thresholds_db.empty() ? 10.0 : o.thresholds_db.front());
  if (o.mode == "snr") q.mode = CoverageMode::kNoiseLimited;
  if (o.mode == "sir") q.mode = CoverageMode::kInterferenceLimited;
  if (o.mode == "center") q.mode = CoverageMode::kClusterCenterOnly;
  q.fading = o.fading == "nakagami" ? FadingModel::kNakagami : FadingModel::kRayleigh;
  if (o.nakagami_form == "scaled") q.nakagami_form = NakagamiForm::kScaled;
  if (o.nakagami_form == "literal") q.nakagami_form = NakagamiForm::kLiteral;
  return q;
}

MonteCarloOptions make_mc(const Options& o) {
  MonteCarloOptions mc;
  mc.trials = o.trials;
  mc.seed = o.seed;
  mc.threads = o.threads;
  mc.ue_model = o.ue_model == "uniform" ? UeModel::kUniform : UeModel::kClustered;
  return mc;
}

std::string tier_tag(const NetworkScenario& s, int j) {
  return std::to_string(s.typical_ue_tier) + std::to_string(j);
}

std::vector<std::string> default_columns(const std::string& command, const NetworkScenario& s,
                                         Method method) {
  std::vector<std::string> cols;
  const int kk = s.tier_count();
  if (command == "ap") {
    for (int j = 0; j <= kk; ++j) {
      const std::string t = tier_tag(s, j);
      cols.insert(cols.end(), {"A" + t, "A" + t + "L", "A" + t + "N"});
    }
    cols.push_back("Asum");
  } else if (command == "cp") {
    cols.push_back("PC");
    for (int j = 0; j <= kk; ++j) cols.push_back("PC" + tier_tag(s, j));
  } else if (command == "rate") {
    cols.push_back("R");
    if (method == Method::kAnalytic) {
      for (int j = 0; j <= kk; ++j) cols.push_back("R" + tier_tag(s, j));
    }
    cols.push_back("RATE");
  } else if (command == "mc") {
    for (int j = 0; j <= kk; ++j) cols.push_back("A" + tier_tag(s, j));
    cols.push_back("PC");
    for (int j = 0; j <= kk; ++j) cols.push_back("PC" + tier_tag(s, j));
  }
  return cols;
}

std::string settings_line(const std::string& command, const Options& o, Method method) {
  std::ostringstream s;
  s << "# command=" << command << " method=" << to_string(method) << " mode=" << o.mode
    << " fading=" << o.fading << " nakagami_form=" << o.nakagami_form;
  if (method != Method::kAnalytic) {
    s << " trials=" << o.trials << " seed=" << o.seed << " ue_model=" << o.ue_model;
  }
  return s.str();
}

void echo_scenario(std::ostream& out, const NetworkScenario& scn) {
  std::istringstream lines(serialize(scn));
  std::string line;
  while (std::getline(lines, line)) out << "# " << line << '\n';
}

int emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw ConfigError("--out: cannot open '" + o.out + "' for writing");
  file << text;
  return kExitOk;
}

int run_table(const std::string& command, const Options& o, std::ostream& out) {
  FlatConfig base = default_config();
  if (!o.config.empty()) merge_config(base, read_config_file(o.config));
  for (const auto& a : o.overrides) apply_override(base, a);
  const NetworkScenario scn = scenario_from_config(base);

  Method method = command == "mc" ? Method::kMonteCarlo : parse_method(o.method);

  SweepSpec spec;
  if (command == "sweep") {
    if (!o.preset.empty()) {
      if (!o.param.empty() || !o.values.empty()) {
        throw ConfigError("--preset cannot be combined with --param or --values");
      }
      spec = find_preset(o.preset);
      if (!o.columns.empty()) spec.columns = o.columns;
    } else {
      if (o.param.empty() || o.values.empty()) {
        throw ConfigError("sweep needs --preset or both --param and --values");
      }
      if (o.columns.empty()) throw ConfigError("sweep needs --columns");
      spec.param = o.param;
      spec.values = o.values;
      spec.columns = o.columns;
    }
  } else {
    spec.name = command;
    spec.columns = o.columns.empty() ? default_columns(command, scn, method) : o.columns;
    if (command == "cp" || command == "mc") {
      spec.param = kThresholdAxis;
      spec.values = o.thresholds_db.empty() ? std::vector<double>{10.0} : o.thresholds_db;
    }
  }

  EvalSettings settings;
  settings.method = method;
  settings.query = make_query(o);
  settings.mc = make_mc(o);
  // The threshold axis carries absolute thresholds; keep the query's at 0 dB.
  if (spec.param == kThresholdAxis) settings.query.threshold = 1.0;

  const Table table = run_sweep(spec, base, settings);

  std::ostringstream text;
  text << "# mmwcov " << command;
  if (!spec.description.empty()) text << " (" << spec.name << ": " << spec.description << ")";
  text << '\n';
  echo_scenario(text, scn);
  text << settings_line(command, o, method) << '\n';
  write_csv(text, table);

  if (command == "mc" && !o.dump.empty()) {
    std::ofstream dump(o.dump, std::ios::binary);
    if (!dump) throw ConfigError("--dump: cannot open '" + o.dump + "' for writing");
    DropOptions d;
    d.ue_model = settings.mc.ue_model;
    d.fading = settings.query.fading;
    for (long long t = 0; t < o.dump_count; ++t) {
      auto rng = trial_stream(o.seed, static_cast<std::uint64_t>(t));
      write_drop(dump, t, sample_drop(scn, d, rng));
    }
  }
  return emit(o, text.str(), out);
}

int list_presets(const Options& o, std::ostream& out) {
  Table t;
  t.header = {"preset", "param", "columns", "description"};
  for (const auto& p : figure_presets()) {
    std::string cols;
    for (const auto& c : p.columns) cols += (cols.empty() ? "" : " ") + c;
    t.rows.push_back({p.name, p.param, cols, p.description});
  }
  std::ostringstream text;
  write_csv(text, t);
  return emit(o, text.str(), out);
}

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b, double c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Closed forms of the all-LOS noise-limited two-tier network against the
// general pipeline, then simulated association frequencies against the
// analytic probabilities.
int selftest(const Options& o, std::ostream& out) {
  std::vector<Check> checks;

  // 100 dB puts the noise term on the scale of the path-loss constants, so the
  // coverage checks are not all trivially 1.
  const NetworkScenario cf = closed_form_scenario(25.0);
  const AssociationModel model(cf);
  for (double t_db : {10.0, 100.0}) {
    CoverageQuery q;
    q.threshold = units::db_to_linear(t_db);
    q.mode = CoverageMode::kNoiseLimited;
    const TwoTierClosedForm ref = closed_form_two_tier(cf, q.threshold);
    const double want_a[3] = {ref.a10, ref.a11, ref.a12};
    const double want_p[3] = {ref.p10, ref.p11, ref.p12};
    const std::string at = "@" + std::to_string(static_cast<int>(t_db)) + "dB";
    for (int j = 0; j <= 2; ++j) {
      const double p = conditional_coverage(cf, j, LinkState::kLos, q);
      const double ep = std::abs(p - want_p[j]) / want_p[j];
      if (t_db == 10.0) {
        const double a =
            model.probability(j, LinkState::kLos) + model.probability(j, LinkState::kNlos);
        const double ea = std::abs(a - want_a[j]) / want_a[j];
        checks.push_back({"closed_form.A1" + std::to_string(j), ea <= 1e-6,
                          fmt("general=%.10g closed=%.10g rel_err=%.3g", a, want_a[j], ea)});
      }
      checks.push_back({"closed_form.P1" + std::to_string(j) + at, ep <= 1e-6,
                        fmt("general=%.10g closed=%.10g rel_err=%.3g", p, want_p[j], ep)});
    }
  }

  const NetworkScenario scn = reference_scenario(25.0);
  MonteCarloOptions mc = make_mc(o);
  if (o.trials == 100000) mc.trials = 20000;  // desk-scale default for selftest
  const AssociationModel ref_model(scn);
  for (const auto& e : estimate_association(scn, mc)) {
    const double p = ref_model.probability(e.tier, e.state);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(e.frequency.trials));
    const double diff = e.frequency.estimate - p;
    const bool ok = se > 0.0 ? std::abs(diff) <= 3.0 * se : std::abs(diff) < 1e-12;
    checks.push_back({std::string("mc_association.A1") + std::to_string(e.tier) +
                          (e.state == LinkState::kLos ? "L" : "N"),
                      ok, fmt("mc=%.6g analytic=%.6g z=%.3g", e.frequency.estimate, p,
                              se > 0.0 ? diff / se : 0.0)});
  }

  std::ostringstream text;
  bool all = true;
  for (const auto& c : checks) {
    text << (c.pass ? "PASS " : "FAIL ") << c.name << ' ' << c.detail << '\n';
    all = all && c.pass;
  }
  emit(o, text.str(), out);
  return all ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uplink coverage of clustered-UE mmWave heterogeneous networks", "mmwcov"};
  app.require_subcommand(1);
  Options o;

  auto* ap = app.add_subcommand("ap", "association probabilities");
  auto* cp = app.add_subcommand("cp", "coverage probabilities at --threshold-db values");
  auto* rate = app.add_subcommand("rate", "average spectral efficiency and rate");
  auto* mc = app.add_subcommand("mc", "Monte Carlo association and coverage");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep or figure preset");
  auto* self = app.add_subcommand("selftest", "built-in consistency checks");
  for (auto* s : {ap, cp, rate, sweep}) add_common(s, o, true);
  add_common(mc, o, false);
  mc->add_option("--dump", o.dump, "write the first drops to this file");
  mc->add_option("--dump-count", o.dump_count, "drops written by --dump")->check(CLI::PositiveNumber);
  sweep->add_option("--param", o.param, "config path, threshold_db, bias_ratio_db or power_ratio_db");
  sweep->add_option("--values", o.values, "sweep values")->delimiter(',');
  sweep->add_option("--preset", o.preset, "named preset (see --list-presets)");
  sweep->add_flag("--list-presets", o.list_presets, "print the preset table and exit");
  self->add_option("--trials", o.trials, "Monte Carlo drops")->check(CLI::Range(1000LL, 1LL << 40));
  self->add_option("--seed", o.seed, "Monte Carlo seed");
  self->add_option("--threads", o.threads, "worker threads")->check(CLI::NonNegativeNumber);
  self->add_option("--out", o.out, "write the report here instead of stdout");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*self) return selftest(o, out);
    if (*sweep && o.list_presets) return list_presets(o, out);
    for (auto* s : {ap, cp, rate, mc, sweep}) {
      if (*s) return run_table(s->get_name(), o, out);
    }
    return kExitFailure;
  } catch (const ConfigError& e) {
    for (const auto& v : e.violations()) err << "config error: " << v << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << " (best estimate " << e.best_estimate()
        << ", error estimate " << e.error_estimate() << ")\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace mmwcov::cli
