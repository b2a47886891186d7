#include "mmwcov/interference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mmwcov/association.hpp"
#include "mmwcov/errors.hpp"
#include "mmwcov/geometry.hpp"

namespace mmwcov {

namespace {

constexpr double kPi = std::numbers::pi;

void require_mu(double mu) {
  if (!(mu >= 0.0) || !std::isfinite(mu)) throw std::domain_error("mu must be non-negative");
}

// (-1)^m m!
double signed_factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return m % 2 == 0 ? f : -f;
}

bool cluster_tier(const NetworkScenario& s, int k) {
  return k >= 1 && k <= s.tier_count() && s.tier(k).hosts_clusters;
}

PowerControlMeasure unit_measure() { return {{1.0}, {1.0}}; }

}  // namespace

PowerControlMeasure power_control_measure(const NetworkScenario& scenario, int k, double tau,
                                          int bins) {
  if (!cluster_tier(scenario, k)) {
    throw std::invalid_argument("power_control_measure: tier " + std::to_string(k) +
                                " hosts no clusters");
  }
  if (tau == 0.0) return unit_measure();
  if (scenario.power_control_mode != PowerControlMode::kPathLoss) {
    throw std::invalid_argument("analytic power control supports the path-loss mode only");
  }
  NetworkScenario local = scenario;
  local.typical_ue_tier = k;
  const AssociationModel model(local);
  const auto& ch = local.channel;

  std::vector<std::pair<double, double>> nodes;
  for (int m = 0; m <= local.tier_count(); ++m) {
    for (LinkState b : kLinkStates) {
      QuadratureSpec spec{1e-7, 1e-12, 200, std::nullopt, model.length_scale(m)};
      QuadratureResult summary;
      const auto rule = discretize_semi_infinite(
          [&](double t) { return model.joint_density(m, b, t); }, 0.0, spec, &summary);
      if (!summary.converged) {
        throw NumericalError("power-control measure did not converge", summary.value, summary.error);
      }
      for (const auto& n : rule) {
        if (n.w <= 0.0 || n.x <= 0.0) continue;
        nodes.emplace_back(std::pow(ch.kappa(b) * std::pow(n.x, ch.alpha(b)), tau), n.w);
      }
    }
  }
  std::sort(nodes.begin(), nodes.end());
  double total = 0.0;
  for (const auto& n : nodes) total += n.second;

  PowerControlMeasure out;
  if (bins <= 0 || static_cast<std::size_t>(bins) >= nodes.size()) {
    for (const auto& [q, w] : nodes) {
      out.factor.push_back(q);
      out.weight.push_back(w / total);
    }
    return out;
  }
  double cumulative = 0.0;
  double bin_w = 0.0;
  double bin_wq = 0.0;
  int bin = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto [q, w] = nodes[i];
    bin_w += w;
    bin_wq += w * q;
    cumulative += w;
    const bool last = i + 1 == nodes.size();
    if (last || (bin + 1 < bins && cumulative >= total * (bin + 1) / bins)) {
      if (bin_w > 0.0) {
        out.factor.push_back(bin_wq / bin_w);
        out.weight.push_back(bin_w / total);
      }
      bin_w = 0.0;
      bin_wq = 0.0;
      ++bin;
    }
  }
  return out;
}

InterferenceModel::InterferenceModel(const NetworkScenario& scenario, InterferenceOptions options)
    : scenario_(validate(scenario)),
      options_(options),
      tau_(scenario_.power_control_tau),
      gains_(gain_distribution(scenario_.antenna)),
      unit_measure_(unit_measure()) {
  if (tau_ > 0.0) {
    for (int k : scenario_.cluster_tiers()) {
      measures_[k] = power_control_measure(scenario_, k, tau_, options_.fpc_bins);
    }
  }
}

const PowerControlMeasure& InterferenceModel::measure(int k) const {
  const auto it = measures_.find(k);
  return it == measures_.end() ? unit_measure_ : it->second;
}

// d^order/dmu^order of the intra-cluster transform at a tier-j server.
double InterferenceModel::intra_impl(int j, double mu, const PowerControlMeasure& q,
                                     int order) const {
  require_mu(mu);
  if (j == 0 || !cluster_tier(scenario_, j)) return order == 0 ? 1.0 : 0.0;
  if (mu == 0.0 && order == 0) return 1.0;
  const double sigma = *scenario_.tier(j).cluster_sigma;
  const auto& ch = scenario_.channel;
  const double pu = scenario_.ue_tx_power;
  const double sign_fact = signed_factorial(order);
  // Derivative integrands are formed in units of mu so their magnitude does
  // not fall below the absolute tolerance.
  const double unit = mu > 0.0 ? mu : 1.0;

  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double s2 = sigma * sigma;
    const double density = r / s2 * std::exp(-0.5 * r * r / s2);
    double acc = 0.0;
    for (LinkState a : kLinkStates) {
      const double pa = ch.state_probability(a, r);
      if (pa == 0.0) continue;
      const double h = ch.kappa(a) * std::pow(r, ch.alpha(a));
      double sum_a = 0.0;
      for (const auto& g : gains_) {
        for (std::size_t n = 0; n < q.factor.size(); ++n) {
          const double c = pu * g.gain * q.factor[n];
          const double denom = h + mu * c;
          double term = h / denom;
          if (order > 0) term *= std::pow(unit * c / denom, order);
          sum_a += g.probability * q.weight[n] * term;
        }
      }
      acc += pa * sum_a;
    }
    return density * acc;
  };
  QuadratureSpec spec = options_.quadrature;
  spec.length_scale = sigma;
  const double value = integrate_semi_infinite(integrand, 0.0, spec)
                           .value_or_throw("intra-cluster Laplace transform");
  // The order-0 integrand is a probability; keep quadrature error out of [0, 1].
  if (order == 0) return std::clamp(value, 0.0, 1.0);
  return sign_fact * value / std::pow(unit, order);
}

bool InterferenceModel::intercell_diverges(double mu) const {
  if (mu == 0.0) return false;
  const auto& ch = scenario_.channel;
  // A state whose probability does not vanish at infinity dominates the tail.
  const LinkState far = ch.blockage_epsilon > 0.0 ? LinkState::kNlos : LinkState::kLos;
  return ch.alpha(far) <= 2.0;
}

// d^order/dmu^order of log L for the inter-cell term of cluster tier k.
double InterferenceModel::intercell_integral(int k, double mu, const PowerControlMeasure& q,
                                             int order) const {
  require_mu(mu);
  if (!cluster_tier(scenario_, k)) return 0.0;
  if (order == 0 && intercell_diverges(mu)) return -std::numeric_limits<double>::infinity();
  const auto& ch = scenario_.channel;
  const double pu = scenario_.ue_tx_power;
  const double lambda = scenario_.tier(k).density;
  const double unit = mu > 0.0 ? mu : 1.0;

  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    double acc = 0.0;
    for (LinkState a : kLinkStates) {
      const double pa = ch.state_probability(a, r);
      if (pa == 0.0) continue;
      const double h = ch.kappa(a) * std::pow(r, ch.alpha(a));
      double sum_a = 0.0;
      for (const auto& g : gains_) {
        for (std::size_t n = 0; n < q.factor.size(); ++n) {
          const double c = pu * g.gain * q.factor[n];
          const double denom = h + mu * c;
          const double term =
              order == 0 ? mu * c / denom : std::pow(unit * c / denom, order) * h / denom;
          sum_a += g.probability * q.weight[n] * term;
        }
      }
      acc += pa * sum_a;
    }
    return r * acc;
  };
  const double value = integrate_semi_infinite(integrand, 0.0, options_.quadrature)
                           .value_or_throw("inter-cell Laplace exponent");
  if (order == 0) return -2.0 * kPi * lambda * value;
  return 2.0 * kPi * lambda * signed_factorial(order) * value / std::pow(unit, order);
}

// Keeps the integral over the cluster-center distance v and the Rice law of
// the interferer distance instead of collapsing them.
double InterferenceModel::intercell_exact(int k, double mu) const {
  require_mu(mu);
  if (!cluster_tier(scenario_, k)) return 1.0;
  if (intercell_diverges(mu)) return 0.0;
  const auto& ch = scenario_.channel;
  const double pu = scenario_.ue_tx_power;
  const double lambda = scenario_.tier(k).density;
  const double sigma = *scenario_.tier(k).cluster_sigma;
  const auto& q = measure(k);

  auto g = [&](double r) {
    if (r <= 0.0) return 0.0;
    double acc = 0.0;
    for (LinkState a : kLinkStates) {
      const double pa = ch.state_probability(a, r);
      if (pa == 0.0) continue;
      const double h = ch.kappa(a) * std::pow(r, ch.alpha(a));
      for (const auto& gain : gains_) {
        for (std::size_t n = 0; n < q.factor.size(); ++n) {
          const double c = mu * pu * gain.gain * q.factor[n];
          acc += pa * gain.probability * q.weight[n] * c / (h + c);
        }
      }
    }
    return acc;
  };
  QuadratureSpec inner{1e-9, 1e-15, 400, std::nullopt, 1.0};
  auto ring = [&](double v) {
    const double lo = std::max(0.0, v - 12.0 * sigma);
    const double hi = v + 12.0 * sigma;
    const double expected =
        integrate_finite([&](double r) { return rice_conditional_pdf(r, v, sigma) * g(r); }, lo, hi,
                         inner)
            .value_or_throw("Rice-averaged interference kernel");
    return v * expected;
  };
  QuadratureSpec outer = options_.quadrature;
  outer.rel_tol = std::max(outer.rel_tol, 1e-8);
  outer.length_scale = sigma;
  const double value =
      integrate_semi_infinite(ring, 0.0, outer).value_or_throw("exact inter-cell exponent");
  return std::exp(-2.0 * kPi * lambda * value);
}

double InterferenceModel::intra_cluster(int j, double mu) const {
  return intra_impl(j, mu, unit_measure_, 0);
}

double InterferenceModel::intercell(int /*j*/, int k, double mu) const {
  if (options_.collapse == CollapseMode::kExactRicianDoubleIntegral) return intercell_exact(k, mu);
  return std::exp(intercell_integral(k, mu, unit_measure_, 0));
}

double InterferenceModel::intra_cluster_fpc(int j, double mu) const {
  return intra_impl(j, mu, measure(j), 0);
}

double InterferenceModel::intercell_fpc(int /*j*/, int k, double mu) const {
  return std::exp(intercell_integral(k, mu, measure(k), 0));
}

double InterferenceModel::intra_cluster_given(int j, double mu, const PowerControlMeasure& q) const {
  return intra_impl(j, mu, q, 0);
}

double InterferenceModel::intercell_given(int k, double mu, const PowerControlMeasure& q) const {
  return std::exp(intercell_integral(k, mu, q, 0));
}

double InterferenceModel::total(int j, double mu) const {
  double out = tau_ > 0.0 ? intra_cluster_fpc(j, mu) : intra_cluster(j, mu);
  for (int k : scenario_.cluster_tiers()) {
    if (out == 0.0) break;
    out *= tau_ > 0.0 ? intercell_fpc(j, k, mu) : intercell(j, k, mu);
  }
  return out;
}

std::vector<double> InterferenceModel::total_derivatives(int j, double mu, int order) const {
  if (order < 0) throw std::invalid_argument("derivative order must be non-negative");
  if (options_.collapse == CollapseMode::kExactRicianDoubleIntegral && order > 0) {
    throw std::invalid_argument("derivatives are only available for the collapsed field");
  }
  const auto n = static_cast<std::size_t>(order) + 1;
  // Sum of the log-derivatives of every inter-cell factor.
  std::vector<double> psi(n, 0.0);
  for (int k : scenario_.cluster_tiers()) {
    for (int m = 0; m <= order; ++m) {
      psi[static_cast<std::size_t>(m)] += intercell_integral(k, mu, measure(k), m);
    }
  }
  std::vector<double> inter(n, 0.0);
  inter[0] = std::exp(psi[0]);
  if (inter[0] == 0.0) return std::vector<double>(n, 0.0);
  for (std::size_t d = 1; d < n; ++d) {
    for (std::size_t i = 0; i < d; ++i) {
      inter[d] += binomial(static_cast<int>(d - 1), static_cast<int>(i)) * psi[i + 1] * inter[d - 1 - i];
    }
  }
  std::vector<double> intra(n, 0.0);
  for (int m = 0; m <= order; ++m) {
    intra[static_cast<std::size_t>(m)] = intra_impl(j, mu, measure(j), m);
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t i = 0; i <= d; ++i) {
      out[d] += binomial(static_cast<int>(d), static_cast<int>(i)) * intra[i] * inter[d - i];
    }
  }
  return out;
}

double laplace_intra_cluster(const NetworkScenario& scenario, int j, double mu) {
  NetworkScenario plain = scenario;
  plain.power_control_tau = 0.0;
  return InterferenceModel(plain).intra_cluster(j, mu);
}

double laplace_intercell(const NetworkScenario& scenario, int j, int k, double mu,
                         CollapseMode collapse) {
  InterferenceOptions options;
  options.collapse = collapse;
  NetworkScenario plain = scenario;
  plain.power_control_tau = 0.0;
  return InterferenceModel(plain, options).intercell(j, k, mu);
}

double laplace_intra_cluster_fpc(const NetworkScenario& scenario, int j, double mu,
                                 const PowerControlMeasure& measure) {
  NetworkScenario plain = scenario;
  plain.power_control_tau = 0.0;
  return InterferenceModel(plain).intra_cluster_given(j, mu, measure);
}

double laplace_intercell_fpc(const NetworkScenario& scenario, int /*j*/, int k, double mu,
                             const PowerControlMeasure& measure) {
  NetworkScenario plain = scenario;
  plain.power_control_tau = 0.0;
  return InterferenceModel(plain).intercell_given(k, mu, measure);
}

}  // namespace mmwcov
