#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmwcov/interference.hpp"
#include "mmwcov/montecarlo.hpp"
#include "oracles.hpp"
#include "reference_model.hpp"

using namespace mmwcov;
using mmwcov::testing::kInf;
using mmwcov::testing::rel_diff;

namespace {

const std::vector<double> kProbe = {0.0, 1e6, 1e7, 1e8, 1e9, 1e10, 1e11, 1e12, 1e14};
const std::vector<double> kGrid5 = {1e7, 1e8, 1e9, 1e10, 1e11};

}  // namespace

TEST_SUITE("interference") {
  TEST_CASE("intra-cluster transform matches the direct integral") {
    for (double sigma : {10.0, 25.0, 60.0}) {
      const auto s = reference_scenario(sigma);
      const InterferenceModel m(s);
      for (double mu : kProbe) {
        INFO("sigma=" << sigma << " mu=" << mu);
        CHECK(std::abs(m.intra_cluster(1, mu) - mmwcov::testing::ref_intra(s, mu)) < 1e-9);
      }
      CHECK(m.intra_cluster(0, 1e9) == 1.0);
      CHECK(m.intra_cluster(2, 1e9) == 1.0);
    }
  }

  TEST_CASE("inter-cell transform matches the PPP functional") {
    for (double eps : {0.001, std::sqrt(2.0) / 200.0, 0.03}) {
      NetworkScenario s = reference_scenario();
      s.channel.blockage_epsilon = eps;
      const InterferenceModel m(s);
      for (double mu : kProbe) {
        INFO("eps=" << eps << " mu=" << mu);
        CHECK(std::abs(m.intercell(1, 1, mu) - mmwcov::testing::ref_intercell(s, mu)) < 1e-8);
      }
      CHECK(m.intercell(1, 2, 1e9) == 1.0);  // macro tier carries no interferers
    }
  }

  TEST_CASE("displaced field equals the collapsed PPP") {
    const auto s = reference_scenario();
    for (double mu : {1e8, 1e10}) {
      const double collapsed = laplace_intercell(s, 1, 1, mu, CollapseMode::kRician);
      const double exact = laplace_intercell(s, 1, 1, mu, CollapseMode::kExactRicianDoubleIntegral);
      CHECK(std::abs(collapsed - exact) < 1e-6);
    }
  }

  TEST_CASE("transform properties on probe grids") {
    for (double tau : {0.0, 0.5, 1.0}) {
      NetworkScenario s = reference_scenario();
      s.power_control_tau = tau;
      const InterferenceModel m(s);
      for (int j = 0; j <= 2; ++j) {
        CHECK(m.total(j, 0.0) == 1.0);
        double prev = 1.0;
        for (double mu : kProbe) {
          const double v = m.total(j, mu);
          INFO("tau=" << tau << " j=" << j << " mu=" << mu);
          CHECK(v <= prev + 1e-12);
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
          if (mu <= 1e10) CHECK(v > 0.0);
          prev = v;
        }
      }
    }
  }

  TEST_CASE("zero power-control exponent reduces to the plain transforms") {
    const auto s = reference_scenario();
    const InterferenceModel m(s);
    for (double mu : kGrid5) {
      CHECK(std::abs(m.intra_cluster_fpc(1, mu) - m.intra_cluster(1, mu)) <= 1e-9);
      CHECK(std::abs(m.intercell_fpc(1, 1, mu) - m.intercell(1, 1, mu)) <= 1e-9);
      CHECK(std::abs(laplace_intra_cluster_fpc(s, 1, mu, m.measure(1)) - laplace_intra_cluster(s, 1, mu)) <= 1e-9);
      CHECK(std::abs(laplace_intercell_fpc(s, 1, 1, mu, m.measure(1)) - laplace_intercell(s, 1, 1, mu)) <= 1e-9);
    }
    const auto& q = m.measure(1);
    REQUIRE(q.factor.size() == 1);
    CHECK(q.factor[0] == 1.0);
    CHECK(q.weight[0] == 1.0);
  }

  TEST_CASE("an explicit power measure mixes scaled transmit powers") {
    const auto s = reference_scenario();
    NetworkScenario loud = s;
    loud.ue_tx_power *= 4.0;
    const PowerControlMeasure q{{1.0, 4.0}, {0.25, 0.75}};
    for (double mu : kGrid5) {
      const double mixed = laplace_intra_cluster_fpc(s, 1, mu, q);
      CHECK(std::abs(mixed - (0.25 * laplace_intra_cluster(s, 1, mu) +
                              0.75 * laplace_intra_cluster(loud, 1, mu))) < 1e-10);
      // The inter-cell exponent is linear in the measure.
      const double inter = laplace_intercell_fpc(s, 1, 1, mu, q);
      const double expect = std::pow(laplace_intercell(s, 1, 1, mu), 0.25) *
                            std::pow(laplace_intercell(loud, 1, 1, mu), 0.75);
      CHECK(rel_diff(inter, expect) < 1e-8);
    }
  }

  TEST_CASE("power-control measures") {
    const auto s = reference_scenario();
    for (double tau : {0.3, 0.8}) {
      const auto full = power_control_measure(s, 1, tau, 0);
      const auto binned = power_control_measure(s, 1, tau, 32);
      double wf = 0.0, mf = 0.0, wb = 0.0, mb = 0.0;
      for (std::size_t n = 0; n < full.factor.size(); ++n) {
        CHECK(full.factor[n] > 0.0);
        wf += full.weight[n];
        mf += full.weight[n] * full.factor[n];
      }
      for (std::size_t n = 0; n < binned.factor.size(); ++n) {
        wb += binned.weight[n];
        mb += binned.weight[n] * binned.factor[n];
      }
      CHECK(wf == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(wb == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(binned.factor.size() <= 32);
      CHECK(rel_diff(mb, mf) < 1e-10);  // binning keeps the mean
    }
  }

  TEST_CASE("Laplace derivatives match finite differences") {
    for (double tau : {0.0, 0.5}) {
      NetworkScenario s = reference_scenario();
      s.power_control_tau = tau;
      const InterferenceModel m(s);
      for (double mu : {1e8, 1e9, 1e10}) {
        const auto d = m.total_derivatives(1, mu, 2);
        const double h = mu * 1e-3;
        const double lp = m.total(1, mu + h);
        const double l0 = m.total(1, mu);
        const double lm = m.total(1, mu - h);
        INFO("tau=" << tau << " mu=" << mu);
        CHECK(rel_diff(d[0], l0) < 1e-12);
        CHECK(rel_diff(d[1], (lp - lm) / (2 * h)) < 1e-5);
        CHECK(rel_diff(d[2], (lp - 2 * l0 + lm) / (h * h)) < 1e-3);
        CHECK(d[1] <= 0.0);
        CHECK(d[2] >= 0.0);
      }
    }
    CHECK_THROWS_AS(InterferenceModel(reference_scenario()).total_derivatives(1, 1e9, -1),
                    std::invalid_argument);
  }

  TEST_CASE("simulated interference agrees with the transforms") {
    const auto s = reference_scenario();
    const InterferenceModel m(s);
    MonteCarloOptions opts;
    opts.trials = 4000;
    opts.seed = 17;
    const std::vector<double> mus = {1e8, 1e9, 1e10};
    const auto intra = estimate_laplace(s, 1, InterferenceTerm::kIntraCluster, 1, mus, opts);
    const auto inter = estimate_laplace(s, 1, InterferenceTerm::kIntercell, 1, mus, opts);
    for (std::size_t n = 0; n < mus.size(); ++n) {
      INFO("mu=" << mus[n]);
      CHECK(std::abs(intra[n].estimate - m.intra_cluster(1, mus[n])) <= 4 * intra[n].standard_error + 1e-6);
      CHECK(std::abs(inter[n].estimate - m.intercell(1, 1, mus[n])) <= 4 * inter[n].standard_error + 1e-6);
    }
  }
}
