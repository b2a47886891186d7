#include <doctest.h>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/distributions/rayleigh.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "ks.hpp"
#include "mmwcov/errors.hpp"
#include "mmwcov/geometry.hpp"
#include "oracles.hpp"

using namespace mmwcov;
using mmwcov::testing::kInf;
using mmwcov::testing::reference_integral;
using mmwcov::testing::rel_diff;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent closed form of D^L = E[exp(-eps R)], R ~ Rayleigh(sigma).
double los_fraction(double sigma, double eps) {
  const double a = eps * sigma;
  return 1.0 - a * std::sqrt(kPi / 2.0) * std::exp(a * a / 2.0) * std::erfc(a / std::sqrt(2.0));
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("LOS probability") {
    CHECK(los_probability(0.0, 0.01) == 1.0);
    CHECK(los_probability(100.0, 0.01) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(los_probability(1e9, 0.0) == 1.0);
    CHECK_THROWS_AS(los_probability(-1.0, 0.01), std::domain_error);
    CHECK_THROWS_AS(los_probability(1.0, -0.01), std::domain_error);
    const LosClassifier c{0.005};
    for (double r : {0.0, 10.0, 400.0}) {
      CHECK(c.probability(LinkState::kLos, r) + c.probability(LinkState::kNlos, r) == doctest::Approx(1.0));
    }
  }

  TEST_CASE("cluster distance law is Rayleigh") {
    const boost::math::rayleigh_distribution<double> ref(25.0);
    const auto law = cluster_distance_law(25.0);
    for (double x : {0.0, 1.0, 12.5, 25.0, 60.0, 150.0}) {
      CHECK(law.pdf(x) == doctest::Approx(boost::math::pdf(ref, x)).epsilon(1e-13));
      CHECK(law.ccdf(x) == doctest::Approx(boost::math::cdf(boost::math::complement(ref, x))).epsilon(1e-13));
    }
    CHECK(law.normalizer == 1.0);
  }

  TEST_CASE("state-conditioned cluster distance laws") {
    const double sigma = 25.0;
    const double eps = std::sqrt(2.0) / 200.0;
    const auto los = cluster_distance_law_conditioned(sigma, LinkState::kLos, eps);
    const auto nlos = cluster_distance_law_conditioned(sigma, LinkState::kNlos, eps);
    CHECK(rel_diff(los.normalizer, los_fraction(sigma, eps)) < 1e-12);
    CHECK(los.normalizer == doctest::Approx(0.8065).epsilon(1e-4));
    CHECK(los.normalizer + nlos.normalizer == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto* law : {&los, &nlos}) {
      CHECK(reference_integral(law->pdf, 0.0, kInf) == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(law->ccdf(0.0) == doctest::Approx(1.0).epsilon(1e-12));
      for (double x : {5.0, 30.0, 80.0}) {
        CHECK(law->ccdf(x) == doctest::Approx(reference_integral(law->pdf, x, kInf)).epsilon(1e-8));
      }
    }
    // Tails of the two states add up to the Rayleigh tail.
    for (double rho : {0.0, 10.0, 50.0}) {
      const double sum = cluster_state_tail(sigma, LinkState::kLos, eps, rho) +
                         cluster_state_tail(sigma, LinkState::kNlos, eps, rho);
      CHECK(sum == doctest::Approx(std::exp(-rho * rho / (2 * sigma * sigma))).epsilon(1e-13));
    }
    CHECK_THROWS_AS(cluster_distance_law_conditioned(sigma, LinkState::kNlos, 0.0), NumericalError);
  }

  TEST_CASE("state intensities and void probabilities") {
    const double lambda = 1e-4;
    const double eps = 0.007;
    for (double x : {1.0, 50.0, 300.0, 3000.0}) {
      const double los = 2 * kPi * lambda / (eps * eps) * (1 - std::exp(-eps * x) * (1 + eps * x));
      CHECK(rel_diff(state_intensity(lambda, LinkState::kLos, eps, x), los) < 1e-10);
      CHECK(rel_diff(state_intensity(lambda, LinkState::kNlos, eps, x), kPi * lambda * x * x - los) < 1e-9);
      CHECK(void_probability(lambda, LinkState::kLos, eps, x) ==
            doctest::Approx(std::exp(-los)).epsilon(1e-12));
    }
    CHECK(rel_diff(state_intensity_total(lambda, LinkState::kLos, eps), 2 * kPi * lambda / (eps * eps)) < 1e-14);
    CHECK(std::isinf(state_intensity_total(lambda, LinkState::kNlos, eps)));
    CHECK(reachability(lambda, LinkState::kLos, eps) ==
          doctest::Approx(1 - std::exp(-2 * kPi * lambda / (eps * eps))));
    CHECK(reachability(lambda, LinkState::kNlos, eps) == 1.0);
    CHECK(reachability(lambda, LinkState::kNlos, 0.0) == 0.0);
    CHECK(reachability(lambda, LinkState::kLos, 0.0) == 1.0);
  }

  TEST_CASE("nearest-BS laws normalize") {
    for (double eps : {0.0, 0.002, 0.007, 0.05}) {
      for (LinkState s : kLinkStates) {
        const auto law = nearest_bs_law(1e-5, s, eps);
        if (law.normalizer == 0.0) {
          CHECK(law.pdf(100.0) == 0.0);
          continue;
        }
        CHECK(mmwcov::testing::reference_integral_split(law.pdf, 0.0, {100.0, 1000.0}, kInf) ==
              doctest::Approx(1.0).epsilon(1e-8));
        CHECK(law.ccdf(0.0) == doctest::Approx(1.0).epsilon(1e-12));
        double prev = 1.0;
        for (double x = 10.0; x < 5000.0; x *= 1.5) {
          const double c = law.ccdf(x);
          CHECK(c <= prev + 1e-15);
          CHECK(c >= 0.0);
          prev = c;
        }
      }
    }
  }

  TEST_CASE("Rice density against the noncentral chi-square law") {
    const double sigma = 20.0;
    for (double v : {0.0, 5.0, 40.0, 200.0}) {
      const boost::math::non_central_chi_squared_distribution<double> y(2.0, v * v / (sigma * sigma));
      for (double r : {0.5, 10.0, 30.0, 60.0, v + 15.0}) {
        const double ref = boost::math::pdf(y, r * r / (sigma * sigma)) * 2.0 * r / (sigma * sigma);
        CHECK(rel_diff(rice_conditional_pdf(r, v, sigma), ref) < 1e-9);
      }
      CHECK(reference_integral([&](double r) { return rice_conditional_pdf(r, v, sigma); }, 0.0, kInf) ==
            doctest::Approx(1.0).epsilon(1e-9));
    }
  }

  TEST_CASE("KS: Gaussian displacement gives the Rayleigh cluster distance") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0.0, 25.0);
    std::vector<double> d(20000);
    for (auto& x : d) x = std::hypot(g(rng), g(rng));
    const auto law = cluster_distance_law(25.0);
    const auto ks = mmwcov::testing::ks_test(d, [&](double x) { return 1.0 - law.ccdf(x); });
    CHECK(ks.p_value > 0.01);
  }
}
