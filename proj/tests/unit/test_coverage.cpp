#include <doctest.h>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

#include "mmwcov/coverage.hpp"
#include "oracles.hpp"
#include "reference_model.hpp"

using namespace mmwcov;
using mmwcov::testing::ref_joint_coverage;
using mmwcov::testing::rel_diff;

namespace {

double db(double x) { return units::db_to_linear(x); }

CoverageQuery query(double t_db, CoverageMode mode = CoverageMode::kFull,
                    FadingModel fading = FadingModel::kRayleigh) {
  CoverageQuery q;
  q.threshold = db(t_db);
  q.mode = mode;
  q.fading = fading;
  return q;
}

NetworkScenario nakagami_scenario(int los, int nlos) {
  NetworkScenario s = reference_scenario();
  s.channel.nakagami_los = los;
  s.channel.nakagami_nlos = nlos;
  return validate(s);
}

}  // namespace

TEST_SUITE("coverage") {
  TEST_CASE("noise-limited coverage matches the direct integral") {
    // A larger noise power makes the noise term bite at moderate thresholds.
    NetworkScenario s = reference_scenario();
    s.noise_power *= 1e4;
    for (double t_db : {-10.0, 10.0, 30.0}) {
      const auto r = network_coverage(s, query(t_db, CoverageMode::kNoiseLimited));
      for (const auto& e : r.per_event) {
        const double ref = mmwcov::testing::ref_joint_coverage_snr(s, e.tier, e.state, db(t_db));
        INFO("T=" << t_db << " j=" << e.tier << " s=" << suffix(e.state));
        CHECK(std::abs(e.joint - ref) <= 1e-7 * std::max(ref, 1e-3));
      }
    }
  }

  TEST_CASE("full SINR coverage matches the direct integral") {
    const auto s = reference_scenario();
    for (double t_db : {0.0, 20.0}) {
      const auto r = network_coverage(s, query(t_db));
      for (const auto& e : r.per_event) {
        auto phi = [&](double mu) {
          const double intra = e.tier == 1 ? mmwcov::testing::ref_intra(s, mu) : 1.0;
          return std::exp(-mu * s.noise_power) * intra * mmwcov::testing::ref_intercell(s, mu);
        };
        const double ref = ref_joint_coverage(s, e.tier, e.state, db(t_db), phi);
        INFO("T=" << t_db << " j=" << e.tier << " s=" << suffix(e.state));
        CHECK(std::abs(e.joint - ref) <= 1e-6 * std::max(ref, 1e-3));
      }
    }
  }

  TEST_CASE("exact gamma fading matches the regularized incomplete gamma") {
    NetworkScenario s = nakagami_scenario(3, 2);
    s.noise_power *= 1e4;
    auto q = query(10.0, CoverageMode::kNoiseLimited, FadingModel::kNakagami);
    q.nakagami_form = NakagamiForm::kExactGamma;
    const auto r = network_coverage(s, q);
    for (const auto& e : r.per_event) {
      const int n = s.channel.nakagami(e.state);
      auto phi = [&](double mu) { return boost::math::gamma_q(n, n * mu * s.noise_power); };
      const double ref = ref_joint_coverage(s, e.tier, e.state, q.threshold, phi);
      INFO("j=" << e.tier << " s=" << suffix(e.state));
      CHECK(std::abs(e.joint - ref) <= 1e-7 * std::max(ref, 1e-3));
    }
  }

  TEST_CASE("scaled gamma form matches its alternating sum") {
    NetworkScenario s = nakagami_scenario(3, 2);
    s.noise_power *= 1e4;
    auto q = query(10.0, CoverageMode::kNoiseLimited, FadingModel::kNakagami);
    q.nakagami_form = NakagamiForm::kScaled;
    const auto r = network_coverage(s, q);
    for (const auto& e : r.per_event) {
      const int n = s.channel.nakagami(e.state);
      const double eta = n * std::pow(std::tgamma(n + 1.0), -1.0 / n);
      auto phi = [&](double mu) {
        double out = 0.0;
        for (int k = 1; k <= n; ++k) {
          const double c = boost::math::binomial_coefficient<double>(n, k);
          out += (k % 2 ? 1.0 : -1.0) * c * std::exp(-k * eta * mu * s.noise_power);
        }
        return std::clamp(out, 0.0, 1.0);
      };
      const double ref = ref_joint_coverage(s, e.tier, e.state, q.threshold, phi);
      CHECK(std::abs(e.joint - ref) <= 1e-7 * std::max(ref, 1e-3));
    }
  }

  TEST_CASE("unit Nakagami shape reduces to Rayleigh per event") {
    const auto s = reference_scenario();
    for (auto form : {NakagamiForm::kExactGamma, NakagamiForm::kScaled, NakagamiForm::kLiteral}) {
      for (double t_db : {0.0, 10.0, 20.0}) {
        auto qn = query(t_db, CoverageMode::kFull, FadingModel::kNakagami);
        qn.nakagami_form = form;
        const auto ray = network_coverage(s, query(t_db));
        const auto nak = network_coverage(s, qn);
        for (std::size_t i = 0; i < ray.per_event.size(); ++i) {
          CHECK(std::abs(ray.per_event[i].conditional - nak.per_event[i].conditional) <= 1e-9);
        }
      }
    }
    // The literal form telescopes to Rayleigh for any shape.
    const auto s32 = nakagami_scenario(3, 2);
    auto lit = query(10.0, CoverageMode::kFull, FadingModel::kNakagami);
    lit.nakagami_form = NakagamiForm::kLiteral;
    CHECK(std::abs(network_coverage(s32, lit).total - network_coverage(s32, query(10.0)).total) < 1e-12);
  }

  TEST_CASE("result structure and orderings") {
    const auto s = reference_scenario();
    double prev = 1.0;
    for (double t_db = -10.0; t_db <= 30.0; t_db += 5.0) {
      const auto full = network_coverage(s, query(t_db));
      const auto snr = network_coverage(s, query(t_db, CoverageMode::kNoiseLimited));
      const auto sir = network_coverage(s, query(t_db, CoverageMode::kInterferenceLimited));
      INFO("T=" << t_db);
      CHECK(full.total <= prev + 1e-12);
      CHECK(full.total <= snr.total + 1e-12);
      CHECK(full.total <= sir.total + 1e-12);
      CHECK(full.total >= 0.0);
      prev = full.total;

      double sum = 0.0;
      REQUIRE(full.per_tier.size() == 3);
      for (int j = 0; j <= 2; ++j) {
        const double t = full.event(j, LinkState::kLos).joint + full.event(j, LinkState::kNlos).joint;
        CHECK(full.per_tier[static_cast<std::size_t>(j)] == doctest::Approx(t).epsilon(1e-14));
        sum += t;
      }
      CHECK(full.total == doctest::Approx(sum).epsilon(1e-14));
      for (const auto& e : full.per_event) {
        CHECK(e.conditional >= 0.0);
        CHECK(e.conditional <= 1.0);
        CHECK(e.joint == doctest::Approx(e.association * e.conditional).epsilon(1e-12));
      }
    }
    CHECK(network_coverage(s, query(10.0)).method == "analytic");
  }

  TEST_CASE("interference and fading trends at 10 dB") {
    const auto s = reference_scenario();
    CHECK(network_coverage(s, query(10.0)).total <
          network_coverage(s, query(10.0, CoverageMode::kNoiseLimited)).total);
    const auto s32 = nakagami_scenario(3, 2);
    CHECK(network_coverage(s32, query(10.0, CoverageMode::kFull, FadingModel::kNakagami)).total >
          network_coverage(s32, query(10.0)).total);
    const double center = coverage_cluster_center(s, query(10.0));
    CHECK(center > 0.0);
    CHECK(center <= 1.0);
  }

  TEST_CASE("per-tier thresholds and power-control overrides") {
    const auto s = reference_scenario();
    auto q = query(10.0);
    q.tier_thresholds = {db(10.0), db(10.0), db(10.0)};
    CHECK(network_coverage(s, q).total == doctest::Approx(network_coverage(s, query(10.0)).total).epsilon(1e-12));
    q.tier_thresholds = {db(10.0), db(10.0), db(0.0)};
    CHECK(network_coverage(s, q).total > network_coverage(s, query(10.0)).total);
    q.tier_thresholds = {db(10.0)};
    CHECK_THROWS_AS(network_coverage(s, q), std::invalid_argument);

    NetworkScenario fpc = s;
    fpc.power_control_tau = 0.5;
    auto over = query(10.0);
    over.power_control_tau = 0.5;
    CHECK(network_coverage(s, over).total == doctest::Approx(network_coverage(fpc, query(10.0)).total).epsilon(1e-12));

    fpc.power_control_mode = PowerControlMode::kDistance;
    CHECK_THROWS_AS(network_coverage(fpc, query(10.0)), std::invalid_argument);
  }

  TEST_CASE("closed forms apply only to their setting") {
    CHECK_THROWS_AS(closed_form_two_tier(reference_scenario(), 10.0), std::invalid_argument);
    const auto cf = closed_form_two_tier(closed_form_scenario(), db(10.0));
    CHECK(cf.a10 + cf.a11 + cf.a12 == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("spectral efficiency of synthetic coverage curves") {
    CHECK(spectral_efficiency([](double t) { return 1.0 / (1.0 + t); }) ==
          doctest::Approx(1.0 / std::numbers::ln2).epsilon(1e-7));
    // Exponential SINR: E[log2(1 + X)] = e E1(1) / ln 2.
    const double ref = std::exp(1.0) * boost::math::expint(1, 1.0) / std::numbers::ln2;
    CHECK(spectral_efficiency([](double t) { return std::exp(-t); }) == doctest::Approx(ref).epsilon(1e-7));
    CHECK(spectral_efficiency([](double) { return 0.0; }) == 0.0);
  }

  TEST_CASE("folded spectral efficiency equals the threshold integral") {
    const auto s = reference_scenario();
    const CoverageEvaluator ev(s, query(10.0));
    for (int j : {0, 2}) {
      const double folded = ev.joint_spectral_efficiency(j, LinkState::kLos);
      const double direct = spectral_efficiency(
          [&](double t) { return ev.joint_coverage(j, LinkState::kLos, t); },
          {1e-8, 1e-10, 400, std::nullopt, 1.0});
      INFO("j=" << j);
      CHECK(rel_diff(folded, direct) < 1e-6);
    }
    const auto se = spectral_efficiency(s, query(10.0));
    double sum = 0.0;
    for (const auto& e : se.per_event) sum += e.joint;
    CHECK(se.total == doctest::Approx(sum).epsilon(1e-12));
    CHECK(se.rate == doctest::Approx(se.total * s.bandwidth).epsilon(1e-14));
  }
}
