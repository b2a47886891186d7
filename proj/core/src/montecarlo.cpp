#include "mmwcov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "mmwcov/channel.hpp"

namespace mmwcov {

namespace {

constexpr double kMinDistance = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) attached to the (UE, BS) link of a drop.
double link_coin(std::uint64_t salt, std::uint64_t ue, std::uint64_t bs) {
  const std::uint64_t h = splitmix64(salt ^ splitmix64((ue << 32) ^ bs ^ (ue >> 32)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

struct Choice {
  double power = -1.0;  // biased received power up to the common G0
  int tier = std::numeric_limits<int>::max();
  LinkState state = LinkState::kNlos;
  int station = -1;
  double distance = 0.0;
};

// Higher power wins; exact ties go to the lower tier index, then LOS.
bool better(const Choice& a, const Choice& b) {
  if (a.power != b.power) return a.power > b.power;
  if (a.tier != b.tier) return a.tier < b.tier;
  return a.state == LinkState::kLos && b.state == LinkState::kNlos;
}

// Station set plus the per-drop constants every link evaluation needs.
class Field {
 public:
  Field(const NetworkScenario& scenario, double half_width, double tau, std::uint64_t salt)
      : scn_(scenario), h_(half_width), tau_(tau), salt_(salt) {}

  std::vector<Station> stations;

  const NetworkScenario& scenario() const { return scn_; }
  double tau() const { return tau_; }

  LinkState state(std::uint64_t ue, int station, double d) const {
    const double eps = scn_.channel.blockage_epsilon;
    if (eps == 0.0) return LinkState::kLos;
    return link_coin(salt_, ue, static_cast<std::uint64_t>(station)) < std::exp(-eps * d)
               ? LinkState::kLos
               : LinkState::kNlos;
  }

  double loss(LinkState s, double d) const {
    const auto& ch = scn_.channel;
    return ch.kappa(s) * std::pow(std::max(d, kMinDistance), ch.alpha(s));
  }

  // Candidate `station` seen by UE `ue` at (x, y); `as_center` applies the
  // cluster-center bias.
  Choice candidate(std::uint64_t ue, double x, double y, int station, bool as_center) const {
    const Station& b = stations[static_cast<std::size_t>(station)];
    Choice c;
    c.station = station;
    c.distance = std::hypot(b.x - x, b.y - y);
    c.state = state(ue, station, c.distance);
    c.tier = as_center ? 0 : b.tier;
    const double pb =
        as_center ? scn_.tier(b.tier).tx_power * scn_.center_bias_value() : scn_.biased_power(b.tier);
    c.power = pb / loss(c.state, c.distance);
    return c;
  }

  Choice associate_scan(std::uint64_t ue, double x, double y, int home) const {
    Choice best;
    if (home >= 0) best = candidate(ue, x, y, home, true);
    for (int i = 0; i < static_cast<int>(stations.size()); ++i) {
      if (i == home) continue;
      const Choice c = candidate(ue, x, y, i, false);
      if (better(c, best)) best = c;
    }
    return best;
  }

  // The same argmax, visiting grid rings outward until no farther station
  // can beat the incumbent.
  Choice associate_grid(std::uint64_t ue, double x, double y, int home) const {
    build_grid();
    Choice best;
    if (home >= 0) best = candidate(ue, x, y, home, true);
    const int cx = std::clamp(static_cast<int>(std::floor((x + h_) / cell_)), 0, cells_ - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((y + h_) / cell_)), 0, cells_ - 1);
    for (int ring = 0; ring <= cells_; ++ring) {
      if (ring >= 2 && power_bound((ring - 1) * cell_) < best.power) break;
      for (int gx = cx - ring; gx <= cx + ring; ++gx) {
        if (gx < 0 || gx >= cells_) continue;
        const bool edge_column = gx == cx - ring || gx == cx + ring;
        const int step = edge_column ? 1 : 2 * ring;
        for (int gy = cy - ring; gy <= cy + ring; gy += std::max(step, 1)) {
          if (gy < 0 || gy >= cells_) continue;
          const int cell = gx * cells_ + gy;
          for (int n = start_[cell]; n < start_[cell + 1]; ++n) {
            const int i = members_[n];
            if (i == home) continue;
            const Choice c = candidate(ue, x, y, i, false);
            if (better(c, best)) best = c;
          }
        }
      }
    }
    return best;
  }

  // Transmit power of a UE whose serving link is `serving`.
  double ue_power(const Choice& serving) const {
    if (tau_ == 0.0) return scn_.ue_tx_power;
    double loss_term;
    if (scn_.power_control_mode == PowerControlMode::kPathLoss) {
      loss_term = loss(serving.state, serving.distance);
    } else {
      loss_term = std::pow(std::max(serving.distance, kMinDistance), scn_.channel.alpha_los);
    }
    return scn_.ue_tx_power * std::pow(loss_term, tau_);
  }

 private:
  double power_bound(double d) const {
    if (!(d > 0.0)) return std::numeric_limits<double>::infinity();
    double pb = 0.0;
    for (int k = 1; k <= scn_.tier_count(); ++k) pb = std::max(pb, scn_.biased_power(k));
    double out = 0.0;
    for (LinkState s : kLinkStates) out = std::max(out, pb / loss(s, d));
    return out;
  }

  void build_grid() const {
    if (!start_.empty()) return;
    double total = 0.0;
    for (const auto& t : scn_.tiers) total += t.density;
    cell_ = std::max(25.0, 0.5 / std::sqrt(total));
    cells_ = std::max(1, static_cast<int>(std::ceil(2.0 * h_ / cell_)));
    const int count = cells_ * cells_;
    std::vector<int> cell_of(stations.size());
    start_.assign(static_cast<std::size_t>(count) + 1, 0);
    for (std::size_t i = 0; i < stations.size(); ++i) {
      const int gx = std::clamp(static_cast<int>(std::floor((stations[i].x + h_) / cell_)), 0,
                                cells_ - 1);
      const int gy = std::clamp(static_cast<int>(std::floor((stations[i].y + h_) / cell_)), 0,
                                cells_ - 1);
      cell_of[i] = gx * cells_ + gy;
      ++start_[cell_of[i] + 1];
    }
    for (int c = 0; c < count; ++c) start_[c + 1] += start_[c];
    members_.assign(stations.size(), 0);
    std::vector<int> fill(start_.begin(), start_.end() - 1);
    for (std::size_t i = 0; i < stations.size(); ++i) {
      members_[fill[cell_of[i]]++] = static_cast<int>(i);
    }
  }

  const NetworkScenario& scn_;
  double h_;
  double tau_;
  std::uint64_t salt_;
  mutable double cell_ = 0.0;
  mutable int cells_ = 0;
  mutable std::vector<int> start_;
  mutable std::vector<int> members_;
};

double resolve_half_width(const NetworkScenario& scenario, std::optional<double> requested,
                          UeModel model) {
  const double guard = guard_half_width(scenario, model);
  if (!requested) return guard;
  if (!(*requested >= guard * (1.0 - 1e-12))) {
    throw std::invalid_argument("window half-width " + std::to_string(*requested) +
                                " m is below the guard band " + std::to_string(guard) + " m");
  }
  return *requested;
}

void place_tiers(Field& field, double h, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(-h, h);
  const auto& scn = field.scenario();
  for (int k = 1; k <= scn.tier_count(); ++k) {
    const double mean = scn.tier(k).density * 4.0 * h * h;
    const long long n = std::poisson_distribution<long long>(mean)(rng);
    for (long long m = 0; m < n; ++m) {
      const double x = coord(rng);
      const double y = coord(rng);
      field.stations.push_back({x, y, k});
    }
  }
}

double tau_of(const NetworkScenario& scenario, std::optional<double> tau) {
  const double t = tau.value_or(scenario.power_control_tau);
  if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("power-control exponent outside [0, 1]");
  return t;
}

// Active member of station i: Gaussian around it, or uniform in the window.
ActiveUe place_member(const Field& field, int i, double h, UeModel model, std::mt19937_64& rng) {
  const Station& b = field.stations[static_cast<std::size_t>(i)];
  ActiveUe u;
  u.home = i;
  if (model == UeModel::kUniform) {
    std::uniform_real_distribution<double> coord(-h, h);
    u.x = coord(rng);
    u.y = coord(rng);
  } else {
    std::normal_distribution<double> g(0.0, *field.scenario().tier(b.tier).cluster_sigma);
    u.x = b.x + g(rng);
    u.y = b.y + g(rng);
  }
  return u;
}

std::uint64_t member_id(int station) { return static_cast<std::uint64_t>(station) + 1; }

// Fills power, link state, gain, fading and received power of `u` toward station `target`.
void radiate(const Field& field, ActiveUe& u, int target, const std::vector<GainAtom>& gains,
             UeModel model, std::mt19937_64& rng) {
  const auto& scn = field.scenario();
  const std::uint64_t id = member_id(u.home);
  if (field.tau() > 0.0) {
    const int home = model == UeModel::kClustered ? u.home : -1;
    u.power = field.ue_power(field.associate_grid(id, u.x, u.y, home));
  } else {
    u.power = scn.ue_tx_power;
  }
  const Station& t = field.stations[static_cast<std::size_t>(target)];
  u.distance = std::hypot(u.x - t.x, u.y - t.y);
  u.state = field.state(id, target, u.distance);
  u.gain = pick_gain(gains, std::uniform_real_distribution<double>(0.0, 1.0)(rng));
  u.fading = std::exponential_distribution<double>(1.0)(rng);
  u.received = u.power * u.gain * u.fading / field.loss(u.state, u.distance);
}

bool hosts_clusters(const NetworkScenario& scn, int tier) { return scn.tier(tier).hosts_clusters; }

template <class Acc, class Body>
Acc run_blocks(const MonteCarloOptions& options, const Acc& zero, Body body) {
  constexpr long long kBlock = 256;
  if (options.trials < 1000) throw std::invalid_argument("Monte Carlo needs at least 1000 trials");
  const long long blocks = (options.trials + kBlock - 1) / kBlock;
  std::vector<Acc> partial(static_cast<std::size_t>(blocks), zero);
  std::atomic<long long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const long long b = next.fetch_add(1);
      if (b >= blocks) return;
      try {
        Acc& acc = partial[static_cast<std::size_t>(b)];
        const long long end = std::min(options.trials, (b + 1) * kBlock);
        for (long long t = b * kBlock; t < end; ++t) {
          auto rng = trial_stream(options.seed, static_cast<std::uint64_t>(t));
          body(t, rng, acc);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(blocks);
        return;
      }
    }
  };
  const int requested = options.threads > 0 ? options.threads : default_thread_count();
  const int workers = static_cast<int>(std::min<long long>(requested, blocks));
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  Acc total = zero;
  for (const auto& p : partial) total.merge(p);
  return total;
}

int event_index(int tier, LinkState s) { return 2 * tier + index_of(s); }

EstimatorOutput proportion(long long hits, long long n, const MonteCarloOptions& options) {
  EstimatorOutput out;
  out.trials = n;
  out.seed = options.seed;
  if (n > 0) {
    out.estimate = static_cast<double>(hits) / static_cast<double>(n);
    out.standard_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(n));
  }
  return out;
}

struct MeanAcc {
  double sum = 0.0;
  double sum_sq = 0.0;
  long long n = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  void merge(const MeanAcc& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  EstimatorOutput output(std::uint64_t seed) const {
    EstimatorOutput out;
    out.trials = n;
    out.seed = seed;
    if (n == 0) return out;
    const double m = sum / static_cast<double>(n);
    const double var = std::max(0.0, sum_sq / static_cast<double>(n) - m * m);
    out.estimate = m;
    out.standard_error = n > 1 ? std::sqrt(var / static_cast<double>(n - 1)) : 0.0;
    return out;
  }
};

DropOptions drop_options(const MonteCarloOptions& mc, const CoverageQuery* query) {
  DropOptions d;
  d.half_width = mc.half_width;
  d.ue_model = mc.ue_model;
  if (query) {
    d.fading = query->fading;
    d.power_control_tau = query->power_control_tau;
    d.force_cluster_center = query->mode == CoverageMode::kClusterCenterOnly;
  }
  return d;
}

double sinr_for_mode(const DropRealization& d, CoverageMode mode) {
  switch (mode) {
    case CoverageMode::kNoiseLimited:
      return d.signal / d.noise;
    case CoverageMode::kInterferenceLimited: {
      const double i = d.interference();
      return i > 0.0 ? d.signal / i : std::numeric_limits<double>::infinity();
    }
    default:
      return d.sinr;
  }
}

}  // namespace

double DropRealization::interference() const {
  double out = intra_interference;
  for (double v : intercell_interference) out += v;
  return out;
}

int default_thread_count() {
  if (const char* env = std::getenv("MMWCOV_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double guard_half_width(const NetworkScenario& scenario, UeModel model) {
  double lambda_min = std::numeric_limits<double>::infinity();
  double sigma_max = 0.0;
  for (const auto& t : validate(scenario).tiers) {
    lambda_min = std::min(lambda_min, t.density);
    if (t.cluster_sigma) sigma_max = std::max(sigma_max, *t.cluster_sigma);
  }
  double scale = 1.0 / std::sqrt(std::numbers::pi * lambda_min);
  if (model == UeModel::kClustered) scale = std::max(scale, 3.0 * sigma_max);
  const double eps = scenario.channel.blockage_epsilon;
  if (eps > 0.0) scale = std::max(scale, 3.0 / eps);
  return 5.0 * scale;
}

std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

DropRealization sample_drop(const NetworkScenario& scenario, const DropOptions& options,
                            std::mt19937_64& rng) {
  const double h = resolve_half_width(scenario, options.half_width, options.ue_model);
  const double tau = tau_of(scenario, options.power_control_tau);
  const bool clustered = options.ue_model == UeModel::kClustered;
  if (options.force_cluster_center && !clustered) {
    throw std::invalid_argument("cluster-center association needs clustered UEs");
  }

  Field field(scenario, h, tau, rng());
  DropRealization d;
  if (clustered) {
    field.stations.push_back({0.0, 0.0, scenario.typical_ue_tier});
    d.parent = 0;
  }
  place_tiers(field, h, rng);
  if (clustered) {
    std::normal_distribution<double> g(0.0, scenario.typical_sigma());
    d.ue_x = g(rng);
    d.ue_y = g(rng);
  }

  Choice serving = options.force_cluster_center
                       ? field.candidate(0, d.ue_x, d.ue_y, d.parent, true)
                       : field.associate_scan(0, d.ue_x, d.ue_y, d.parent);
  d.serving = serving.station;
  d.serving_tier = serving.tier;
  d.serving_state = serving.state;
  d.serving_distance = serving.distance;

  if (options.association_only) {
    d.stations = std::move(field.stations);
    return d;
  }

  const auto& ch = scenario.channel;
  double h0;
  if (options.fading == FadingModel::kNakagami) {
    h0 = sample_fading(serving.state, ch, rng);
  } else {
    h0 = std::exponential_distribution<double>(1.0)(rng);
  }
  d.signal = field.ue_power(serving) * scenario.antenna.serving_gain() * h0 /
             field.loss(serving.state, serving.distance);
  d.noise = scenario.noise_power;

  const auto gains = gain_distribution(scenario.antenna);
  d.intercell_interference.assign(static_cast<std::size_t>(scenario.tier_count()) + 1, 0.0);
  for (int i = 0; i < static_cast<int>(field.stations.size()); ++i) {
    const int tier = field.stations[static_cast<std::size_t>(i)].tier;
    if (!hosts_clusters(scenario, tier)) continue;
    // The parent's active member is the typical UE itself when it serves;
    // without clusters the serving cell has no other active UE.
    if (i == d.serving && (i == d.parent || !clustered)) continue;
    ActiveUe u = place_member(field, i, h, options.ue_model, rng);
    radiate(field, u, d.serving, gains, options.ue_model, rng);
    if (i == d.serving) {
      d.intra_interference += u.received;
    } else {
      d.intercell_interference[static_cast<std::size_t>(tier)] += u.received;
    }
    d.interferers.push_back(u);
  }
  d.stations = std::move(field.stations);
  d.sinr = d.signal / (d.noise + d.interference());
  return d;
}

void write_drop(std::ostream& out, long long trial, const DropRealization& d) {
  char buf[512];
  const auto& s = d.stations[static_cast<std::size_t>(d.serving)];
  std::snprintf(buf, sizeof buf,
                "trial=%lld ue=(%.6g,%.6g) serving=%d tier=%d state=%s bs=(%.6g,%.6g) "
                "distance=%.9g signal=%.9g intra=%.9g inter=%.9g noise=%.9g sinr=%.9g "
                "stations=%zu interferers=%zu\n",
                trial, d.ue_x, d.ue_y, d.serving, d.serving_tier, suffix(d.serving_state).data(),
                s.x, s.y, d.serving_distance, d.signal, d.intra_interference,
                d.interference() - d.intra_interference, d.noise, d.sinr, d.stations.size(),
                d.interferers.size());
  out << buf;
}

namespace {

struct AssociationAcc {
  std::vector<long long> counts;
  std::vector<std::vector<double>> distances;

  void merge(const AssociationAcc& o) {
    for (std::size_t e = 0; e < counts.size(); ++e) {
      counts[e] += o.counts[e];
      distances[e].insert(distances[e].end(), o.distances[e].begin(), o.distances[e].end());
    }
  }
};

struct CoverageAcc {
  std::vector<long long> counts;               // per event
  std::vector<std::vector<long long>> hits;    // per threshold, per event

  void merge(const CoverageAcc& o) {
    for (std::size_t e = 0; e < counts.size(); ++e) counts[e] += o.counts[e];
    for (std::size_t t = 0; t < hits.size(); ++t) {
      for (std::size_t e = 0; e < hits[t].size(); ++e) hits[t][e] += o.hits[t][e];
    }
  }
};

}  // namespace

std::vector<EventEstimate> estimate_association(const NetworkScenario& scenario,
                                                const MonteCarloOptions& options,
                                                bool keep_distances) {
  const NetworkScenario scn = validate(scenario);
  const std::size_t events = 2 * (static_cast<std::size_t>(scn.tier_count()) + 1);
  AssociationAcc zero{std::vector<long long>(events, 0), std::vector<std::vector<double>>(events)};
  DropOptions drop = drop_options(options, nullptr);
  drop.association_only = true;
  const auto total = run_blocks(options, zero, [&](long long, std::mt19937_64& rng, AssociationAcc& acc) {
    const auto d = sample_drop(scn, drop, rng);
    const auto e = static_cast<std::size_t>(event_index(d.serving_tier, d.serving_state));
    ++acc.counts[e];
    if (keep_distances) acc.distances[e].push_back(d.serving_distance);
  });
  std::vector<EventEstimate> out;
  for (int j = 0; j <= scn.tier_count(); ++j) {
    for (LinkState s : kLinkStates) {
      const auto e = static_cast<std::size_t>(event_index(j, s));
      EventEstimate est;
      est.tier = j;
      est.state = s;
      est.frequency = proportion(total.counts[e], options.trials, options);
      est.distances = total.distances[e];
      out.push_back(std::move(est));
    }
  }
  return out;
}

std::vector<CoverageResult> estimate_coverage(const NetworkScenario& scenario,
                                              const CoverageQuery& query,
                                              const std::vector<double>& thresholds,
                                              const MonteCarloOptions& options) {
  const NetworkScenario scn = validate(scenario);
  const int kk = scn.tier_count();
  const std::size_t events = 2 * (static_cast<std::size_t>(kk) + 1);
  // Per threshold and serving tier, as in the analytic evaluator.
  std::vector<std::vector<double>> limit(thresholds.size(), std::vector<double>(kk + 1));
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    if (!(thresholds[t] >= 0.0)) throw std::invalid_argument("threshold must be non-negative");
    for (int j = 0; j <= kk; ++j) {
      limit[t][j] = query.threshold > 0.0
                        ? query.threshold_for(j) * thresholds[t] / query.threshold
                        : thresholds[t];
    }
  }
  CoverageAcc zero{std::vector<long long>(events, 0),
                   std::vector<std::vector<long long>>(thresholds.size(),
                                                       std::vector<long long>(events, 0))};
  const DropOptions drop = drop_options(options, &query);
  const auto total = run_blocks(options, zero, [&](long long, std::mt19937_64& rng, CoverageAcc& acc) {
    const auto d = sample_drop(scn, drop, rng);
    const auto e = static_cast<std::size_t>(event_index(d.serving_tier, d.serving_state));
    ++acc.counts[e];
    const double sinr = sinr_for_mode(d, query.mode);
    for (std::size_t t = 0; t < thresholds.size(); ++t) {
      if (sinr > limit[t][static_cast<std::size_t>(d.serving_tier)]) ++acc.hits[t][e];
    }
  });

  std::vector<CoverageResult> out;
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    CoverageResult r;
    r.method = "monte_carlo";
    r.per_tier.assign(static_cast<std::size_t>(kk) + 1, 0.0);
    long long covered = 0;
    for (int j = 0; j <= kk; ++j) {
      for (LinkState s : kLinkStates) {
        const auto e = static_cast<std::size_t>(event_index(j, s));
        const long long n = total.counts[e];
        const long long hits = total.hits[t][e];
        EventCoverage ev;
        ev.tier = j;
        ev.state = s;
        ev.association = static_cast<double>(n) / static_cast<double>(options.trials);
        const auto cond = proportion(hits, n, options);
        ev.conditional = cond.estimate;
        ev.standard_error = cond.standard_error;
        ev.joint = static_cast<double>(hits) / static_cast<double>(options.trials);
        ev.hits = n;
        ev.low_confidence = n < 50;
        r.per_tier[static_cast<std::size_t>(j)] += ev.joint;
        r.per_event.push_back(ev);
        covered += hits;
      }
    }
    const auto overall = proportion(covered, options.trials, options);
    r.total = overall.estimate;
    r.standard_error = overall.standard_error;
    out.push_back(std::move(r));
  }
  return out;
}

CoverageResult estimate_coverage(const NetworkScenario& scenario, const CoverageQuery& query,
                                 const MonteCarloOptions& options) {
  return estimate_coverage(scenario, query, {query.threshold}, options).front();
}

RateEstimate estimate_rate(const std::function<double(long long, std::mt19937_64&)>& sinr_source,
                           const MonteCarloOptions& options, double bandwidth) {
  const auto total = run_blocks(options, MeanAcc{}, [&](long long t, std::mt19937_64& rng, MeanAcc& acc) {
    acc.add(std::log2(1.0 + sinr_source(t, rng)));
  });
  RateEstimate out;
  out.spectral_efficiency = total.output(options.seed);
  out.rate = out.spectral_efficiency.estimate * bandwidth;
  return out;
}

RateEstimate estimate_rate(const NetworkScenario& scenario, const CoverageQuery& query,
                           const MonteCarloOptions& options) {
  const NetworkScenario scn = validate(scenario);
  const DropOptions drop = drop_options(options, &query);
  return estimate_rate(
      [&](long long, std::mt19937_64& rng) {
        return sinr_for_mode(sample_drop(scn, drop, rng), query.mode);
      },
      options, scn.bandwidth);
}

std::vector<EstimatorOutput> estimate_laplace(const NetworkScenario& scenario, int j,
                                              InterferenceTerm term, int k,
                                              const std::vector<double>& mus,
                                              const MonteCarloOptions& options) {
  const NetworkScenario scn = validate(scenario);
  scn.tier(j);
  if (term == InterferenceTerm::kIntercell) scn.tier(k);
  for (double mu : mus) {
    if (!(mu >= 0.0)) throw std::invalid_argument("mu must be non-negative");
  }
  const double h = resolve_half_width(scn, options.half_width, options.ue_model);
  const double tau = tau_of(scn, std::nullopt);
  const auto gains = gain_distribution(scn.antenna);

  struct Acc {
    std::vector<MeanAcc> per_mu;
    void merge(const Acc& o) {
      for (std::size_t m = 0; m < per_mu.size(); ++m) per_mu[m].merge(o.per_mu[m]);
    }
  };
  const auto total = run_blocks(options, Acc{std::vector<MeanAcc>(mus.size())},
                                [&](long long, std::mt19937_64& rng, Acc& acc) {
    Field field(scn, h, tau, rng());
    field.stations.push_back({0.0, 0.0, j});
    place_tiers(field, h, rng);
    double interference = 0.0;
    for (int i = 0; i < static_cast<int>(field.stations.size()); ++i) {
      const int tier = field.stations[static_cast<std::size_t>(i)].tier;
      if (!hosts_clusters(scn, tier)) continue;
      const bool intra = i == 0;
      if (intra && options.ue_model == UeModel::kUniform) continue;
      ActiveUe u = place_member(field, i, h, options.ue_model, rng);
      radiate(field, u, 0, gains, options.ue_model, rng);
      const bool take = term == InterferenceTerm::kTotal ||
                        (term == InterferenceTerm::kIntraCluster && intra) ||
                        (term == InterferenceTerm::kIntercell && !intra && tier == k);
      if (take) interference += u.received;
    }
    for (std::size_t m = 0; m < mus.size(); ++m) acc.per_mu[m].add(std::exp(-mus[m] * interference));
  });
  std::vector<EstimatorOutput> out;
  for (const auto& m : total.per_mu) out.push_back(m.output(options.seed));
  return out;
}

}  // namespace mmwcov
