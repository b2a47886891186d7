#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmwcov/association.hpp"
#include "mmwcov/config.hpp"
#include "oracles.hpp"
#include "reference_model.hpp"

using namespace mmwcov;
using mmwcov::testing::kInf;
using mmwcov::testing::rel_diff;

namespace {

double total(const AssociationModel& m) {
  double sum = 0.0;
  for (int j = 0; j <= m.scenario().tier_count(); ++j) {
    for (LinkState s : kLinkStates) sum += m.probability(j, s);
  }
  return sum;
}

double tier_prob(const AssociationModel& m, int j) {
  return m.probability(j, LinkState::kLos) + m.probability(j, LinkState::kNlos);
}

NetworkScenario with(double sigma, double eps) {
  NetworkScenario s = reference_scenario(sigma);
  s.channel.blockage_epsilon = eps;
  return validate(s);
}

}  // namespace

TEST_SUITE("association") {
  TEST_CASE("matches the direct integral oracle") {
    for (double sigma : {10.0, 25.0, 60.0}) {
      for (double eps : {0.0, 0.003, std::sqrt(2.0) / 200.0, 0.03}) {
        const auto scn = with(sigma, eps);
        const AssociationModel m(scn);
        for (int j = 0; j <= 2; ++j) {
          for (LinkState s : kLinkStates) {
            const double ref = mmwcov::testing::ref_association(scn, j, s);
            const double got = m.probability(j, s);
            INFO("sigma=" << sigma << " eps=" << eps << " j=" << j << " s=" << suffix(s));
            CHECK(std::abs(got - ref) <= 1e-7 * std::max(ref, 1e-3));
          }
        }
      }
    }
  }

  TEST_CASE("oracle agreement with unequal biases, intercepts and three tiers") {
    NetworkScenario s = reference_scenario(30.0);
    s.tiers[0].bias = 4.0;
    s.center_bias = 2.0;
    s.channel.kappa_nlos = s.channel.kappa_los * 3.0;
    s.channel.alpha_nlos = 3.3;
    TierParams extra;
    extra.density = 3e-5;
    extra.tx_power = 2.0;
    extra.bias = 1.5;
    s.tiers.insert(s.tiers.begin() + 1, extra);
    s = validate(s);
    const AssociationModel m(s);
    for (int j = 0; j <= 3; ++j) {
      for (LinkState st : kLinkStates) {
        const double ref = mmwcov::testing::ref_association(s, j, st);
        INFO("j=" << j << " s=" << suffix(st));
        CHECK(std::abs(m.probability(j, st) - ref) <= 1e-7 * std::max(ref, 1e-3));
      }
    }
    CHECK(total(m) == doctest::Approx(1.0).epsilon(1e-7));
  }

  TEST_CASE("no-blockage closed form") {
    // All links LOS, alpha = 2, unit intercepts: Rayleigh and PPP laws give rational forms.
    for (double sigma : {10.0, 25.0, 80.0}) {
      const NetworkScenario s = closed_form_scenario(sigma);
      const double pi = std::numbers::pi;
      const double l1 = s.tier(1).density;
      const double l2 = s.tier(2).density;
      const double r = s.biased_power(2) / s.biased_power(1);
      const double c0 = 1 / (2 * sigma * sigma) + pi * l1 + pi * l2 * r;
      const double c2 = c0 / r;
      const AssociationModel m(s);
      CHECK(rel_diff(tier_prob(m, 0), 1 / (2 * sigma * sigma * c0)) < 1e-8);
      CHECK(rel_diff(tier_prob(m, 1), pi * l1 / c0) < 1e-8);
      CHECK(rel_diff(tier_prob(m, 2), pi * l2 / c2) < 1e-8);
      CHECK(m.probability(1, LinkState::kNlos) == 0.0);
    }
  }

  TEST_CASE("probabilities sum to one across the parameter space") {
    for (double sigma : {5.0, 25.0, 150.0, 500.0}) {
      for (double eps : {0.0, 0.001, 0.01, 0.05}) {
        for (double bias_db : {-10.0, 0.0, 15.0}) {
          NetworkScenario s = with(sigma, eps);
          s.tier(1).bias = units::db_to_linear(bias_db);
          const AssociationModel m(s);
          INFO("sigma=" << sigma << " eps=" << eps << " bias=" << bias_db);
          CHECK(total(m) == doctest::Approx(1.0).epsilon(1e-6));
          for (const auto& e : m.events()) {
            CHECK(e.probability >= 0.0);
            CHECK(e.probability <= 1.0);
          }
        }
      }
    }
  }

  TEST_CASE("trends in the cluster spread") {
    double prev0 = 2.0;
    double prev1 = -1.0;
    double prev2 = -1.0;
    for (double sigma : {10.0, 20.0, 30.0, 40.0, 60.0}) {
      const AssociationModel m(reference_scenario(sigma));
      CHECK(tier_prob(m, 0) < prev0);
      CHECK(tier_prob(m, 1) > prev1);
      CHECK(tier_prob(m, 2) > prev2);
      prev0 = tier_prob(m, 0);
      prev1 = tier_prob(m, 1);
      prev2 = tier_prob(m, 2);
    }
    // Wide clusters leave the cluster center irrelevant.
    CHECK(tier_prob(AssociationModel(reference_scenario(500.0)), 0) < 0.01);
  }

  TEST_CASE("trends in the small-cell bias") {
    double prev0 = -1.0;
    double prev1 = -1.0;
    double prev2 = 2.0;
    for (double db : {0.0, 5.0, 10.0, 15.0}) {
      NetworkScenario s = reference_scenario();
      s.tier(1).bias = units::db_to_linear(db) * s.tier(2).bias;
      const AssociationModel m(validate(s));
      CHECK(tier_prob(m, 0) > prev0);
      CHECK(tier_prob(m, 1) > prev1);
      CHECK(tier_prob(m, 2) < prev2);
      prev0 = tier_prob(m, 0);
      prev1 = tier_prob(m, 1);
      prev2 = tier_prob(m, 2);
    }
  }

  TEST_CASE("serving-distance laws normalize") {
    const auto scn = reference_scenario();
    for (int j = 0; j <= 2; ++j) {
      for (LinkState s : kLinkStates) {
        const auto pdf = conditional_distance_pdf(scn, j, s);
        const double scale = j == 0 ? 25.0 : 1.0 / std::sqrt(std::numbers::pi * scn.tier(j).density);
        const double mass = mmwcov::testing::reference_integral_split(
            pdf, 0.0, {scale, 4 * scale, 16 * scale}, kInf, 1e-11);
        INFO("j=" << j << " s=" << suffix(s));
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
      }
    }
    CHECK_THROWS_AS(conditional_distance_pdf(closed_form_scenario(), 1, LinkState::kNlos), std::domain_error);
  }

  TEST_CASE("win radius") {
    const auto s = reference_scenario();
    const double r = 40.0;
    const double c = s.biased_power(2) * s.channel.kappa_los / (s.biased_power(1) * s.channel.kappa_nlos);
    CHECK(biased_power_threshold(s, 2, LinkState::kNlos, 1, LinkState::kLos, r) ==
          doctest::Approx(std::pow(c * r * r, 1.0 / 4.0)));
    CHECK(biased_power_threshold(s, 1, LinkState::kLos, 1, LinkState::kLos, r) == doctest::Approx(r));
  }

  TEST_CASE("unweighted reachability wiring is not a probability measure") {
    // With blockage the LOS tier intensity is finite, so D < 1 and dividing by it breaks the sum.
    NetworkScenario s = with(25.0, 0.05);
    const AssociationModel weighted(s, ReachabilityWiring::kWeighted);
    const AssociationModel unweighted(s, ReachabilityWiring::kUnweighted);
    CHECK(total(weighted) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(total(unweighted) - 1.0) > 1e-4);
  }
}
