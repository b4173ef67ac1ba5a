#include <benchmark/benchmark.h>

#include <bell/classical.hpp>
#include <bell/quantum.hpp>
#include <bell/strength.hpp>
#include <bell/tensor.hpp>

namespace {

void BM_InfDivergenceChsh(benchmark::State& state) {
  using namespace bell;
  QuantumModel m = cglmp_model(2, maximally_entangled(2));
  ProbabilityLaw law = born_law(m, SettingDistribution::uniform(m.scenario));
  for (auto _ : state) {
    StrengthResult res = inf_divergence(law, 1e-9);
    benchmark::DoNotOptimize(res.divergence);
  }
}
BENCHMARK(BM_InfDivergenceChsh)->Unit(benchmark::kMillisecond);

void BM_InfDivergenceGhz(benchmark::State& state) {
  using namespace bell;
  ProbabilityLaw law = born_law(ghz_model(), ghz_setting_distribution());
  for (auto _ : state) {
    StrengthResult res = inf_divergence(law, 1e-9);
    benchmark::DoNotOptimize(res.divergence);
  }
}
BENCHMARK(BM_InfDivergenceGhz)->Unit(benchmark::kMillisecond);

void BM_InfDivergenceCglmp(benchmark::State& state) {
  using namespace bell;
  int d = static_cast<int>(state.range(0));
  QuantumModel m = cglmp_model(d, maximally_entangled(d));
  ProbabilityLaw law = born_law(m, SettingDistribution::uniform(m.scenario));
  for (auto _ : state) {
    StrengthResult res = inf_divergence(law, 1e-9);
    benchmark::DoNotOptimize(res.divergence);
  }
}
BENCHMARK(BM_InfDivergenceCglmp)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_BornLaw(benchmark::State& state) {
  using namespace bell;
  int d = static_cast<int>(state.range(0));
  QuantumModel m = cglmp_model(d, maximally_entangled(d));
  SettingDistribution pi = SettingDistribution::uniform(m.scenario);
  for (auto _ : state) {
    ProbabilityLaw law = born_law(m, pi);
    benchmark::DoNotOptimize(law.entries);
  }
}
BENCHMARK(BM_BornLaw)->Arg(2)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_ClassicalMaxLadder(benchmark::State& state) {
  using namespace bell;
  int rungs = static_cast<int>(state.range(0));
  BellInequality ineq = ladder_inequality(rungs);
  for (auto _ : state) {
    ClassicalMaxResult res = classical_max(ineq, ineq.pi);
    benchmark::DoNotOptimize(res.value);
  }
}
BENCHMARK(BM_ClassicalMaxLadder)->Arg(3)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Canonicalize(benchmark::State& state) {
  using namespace bell;
  BellInequality ineq = cglmp_inequality(3);
  for (auto _ : state) {
    BellInequality canon = canonicalize(ineq);
    benchmark::DoNotOptimize(canon.coefficients);
  }
}
BENCHMARK(BM_Canonicalize)->Unit(benchmark::kMicrosecond);

void BM_HermitianEig(benchmark::State& state) {
  using namespace bell;
  int n = static_cast<int>(state.range(0));
  ComplexMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double re = std::cos(0.7 * (i + 1) * (j + 2));
      double im = i == j ? 0.0 : std::sin(0.3 * (i - j));
      a(i, j) = {re, im};
      a(j, i) = {re, -im};
    }
  for (auto _ : state) {
    EigDecomposition eig = hermitian_eig(a);
    benchmark::DoNotOptimize(eig.eigenvalues);
  }
}
BENCHMARK(BM_HermitianEig)->Arg(8)->Arg(16)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
