// Serial reference against the OpenMP path for the parallel kernels.
#include <benchmark/benchmark.h>

#include "hcm/random.hpp"
#include "hcm/spectra.hpp"
#include "hcm/symbolic.hpp"
#include "hcm/theorem_lab.hpp"

using namespace hcm;

namespace {

Exec mode(const benchmark::State& st) { return st.range(0) ? Exec::Parallel : Exec::Serial; }

void BM_SpectrumPartition(benchmark::State& st) {
  const Signature sig = default_signature();
  auto rng = make_rng(7, 0);
  const DenseOperator f = random_operator(sig, 6, 6, rng);
  const CentralGrid grid = CentralGrid::make(sig, 1.0, 0.25);
  for (auto _ : st) benchmark::DoNotOptimize(spectrum_partition(f, grid, mode(st)));
}

void BM_RadiiGrid(benchmark::State& st) {
  const ShiftPolynomial s = ShiftPolynomial::shift(default_signature());
  for (auto _ : st) benchmark::DoNotOptimize(radii_grid(s, 2.0, 0.05, mode(st)));
}

void BM_Suite(benchmark::State& st) {
  SuiteConfig cfg;
  cfg.trials = 50;
  cfg.exec = mode(st);
  for (auto _ : st) benchmark::DoNotOptimize(run_suite("index_theorem", cfg));
}

void BM_DixmierSampled(benchmark::State& st) {
  const Signature sig = default_signature();
  auto rng = make_rng(11, 0);
  const Submodule m = random_submodule(sig, 3, rng), n = random_submodule(sig, 3, rng);
  for (auto _ : st) benchmark::DoNotOptimize(dixmier_sampled(m, n, 20000, 5, mode(st)));
}

}  // namespace

// Argument 0 is the serial reference, 1 the OpenMP path.
BENCHMARK(BM_SpectrumPartition)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RadiiGrid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Suite)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DixmierSampled)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
