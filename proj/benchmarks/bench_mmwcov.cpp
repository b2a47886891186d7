#include <benchmark/benchmark.h>

#include "mmwcov/association.hpp"
#include "mmwcov/coverage.hpp"
#include "mmwcov/interference.hpp"
#include "mmwcov/montecarlo.hpp"
#include "mmwcov/scenario.hpp"

using namespace mmwcov;

static void BM_AssociationModel(benchmark::State& state) {
  const auto s = reference_scenario(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    const AssociationModel m(s);
    double sum = 0.0;
    for (int j = 0; j <= 2; ++j) {
      sum += m.probability(j, LinkState::kLos) + m.probability(j, LinkState::kNlos);
    }
    benchmark::DoNotOptimize(sum);
  }
}
BENCHMARK(BM_AssociationModel)->Arg(10)->Arg(25)->Arg(60)->Unit(benchmark::kMillisecond);

static void BM_LaplaceIntercell(benchmark::State& state) {
  const auto s = reference_scenario();
  const InterferenceModel m(s);
  double mu = 1e8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.intercell(1, 1, mu));
    mu *= 1.0001;  // defeat any caching
  }
}
BENCHMARK(BM_LaplaceIntercell)->Unit(benchmark::kMicrosecond);

static void BM_LaplaceIntercellFpc(benchmark::State& state) {
  NetworkScenario s = reference_scenario();
  s.power_control_tau = 0.5;
  const InterferenceModel m(validate(s));
  double mu = 1e8;
  for (auto _ : state) {
    benchmark::DoNotOptimize(m.intercell_fpc(1, 1, mu));
    mu *= 1.0001;
  }
}
BENCHMARK(BM_LaplaceIntercellFpc)->Unit(benchmark::kMicrosecond);

static void BM_NetworkCoverage(benchmark::State& state) {
  const auto s = reference_scenario();
  CoverageQuery q;
  q.fading = state.range(0) ? FadingModel::kNakagami : FadingModel::kRayleigh;
  NetworkScenario n = s;
  if (state.range(0)) {
    n.channel.nakagami_los = 3;
    n.channel.nakagami_nlos = 2;
  }
  n = validate(n);
  for (auto _ : state) benchmark::DoNotOptimize(network_coverage(n, q).total);
}
BENCHMARK(BM_NetworkCoverage)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_SpectralEfficiency(benchmark::State& state) {
  const auto s = reference_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(spectral_efficiency(s, CoverageQuery{}).total);
}
BENCHMARK(BM_SpectralEfficiency)->Unit(benchmark::kMillisecond)->Iterations(2);

static void BM_SampleDrop(benchmark::State& state) {
  const auto s = reference_scenario();
  DropOptions d;
  d.association_only = state.range(0) != 0;
  std::uint64_t t = 0;
  for (auto _ : state) {
    auto rng = trial_stream(1, t++);
    benchmark::DoNotOptimize(sample_drop(s, d, rng).sinr);
  }
}
BENCHMARK(BM_SampleDrop)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
