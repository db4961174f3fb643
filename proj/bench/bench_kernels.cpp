#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "vsc/co2.hpp"
#include "vsc/forces.hpp"
#include "vsc/integrator.hpp"
#include "vsc/spectra.hpp"

namespace {

vsc::EnsembleConfig ensemble(int n) {
  const vsc::CO2Preset p = vsc::CO2Preset::standard();
  return p.make_ensemble(n, 0.1 / std::sqrt(static_cast<double>(n)), std::sqrt(p.k_a()), vsc::ApproximationLevel::sc);
}

void BM_ForcesSerial(benchmark::State& st) {
  const vsc::EnsembleConfig c = ensemble(static_cast<int>(st.range(0)));
  const vsc::ForceField f(c, c.level);
  const vsc::SystemState s = vsc::initial_state(c, 0.1, 7);
  vsc::ForceResult out;
  for (auto _ : st) {
    f.evaluate_serial(s, out);
    benchmark::DoNotOptimize(out.photon);
  }
}

void BM_ForcesParallel(benchmark::State& st) {
  const vsc::EnsembleConfig c = ensemble(static_cast<int>(st.range(0)));
  const vsc::ForceField f(c, c.level);
  const vsc::SystemState s = vsc::initial_state(c, 0.1, 7);
  vsc::ForceResult out;
  for (auto _ : st) {
    f.evaluate_parallel(s, out);
    benchmark::DoNotOptimize(out.photon);
  }
}

std::vector<double> noise(std::size_t n) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return vsc::centered(x);
}

template <std::vector<double> (*Acf)(std::span<const double>, int)>
void BM_Acf(benchmark::State& st) {
  const std::vector<double> x = noise(static_cast<std::size_t>(st.range(0)));
  const int lag = static_cast<int>(st.range(0) / 32);
  for (auto _ : st) benchmark::DoNotOptimize(Acf(x, lag));
}

}  // namespace

BENCHMARK(BM_ForcesSerial)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK(BM_ForcesParallel)->RangeMultiplier(4)->Range(16, 4096);
BENCHMARK_TEMPLATE(BM_Acf, vsc::autocorrelation_serial)->Arg(1 << 14)->Arg(40001);
BENCHMARK_TEMPLATE(BM_Acf, vsc::autocorrelation_parallel)->Arg(1 << 14)->Arg(40001);
BENCHMARK_TEMPLATE(BM_Acf, vsc::autocorrelation_fft)->Arg(1 << 14)->Arg(40001);

BENCHMARK_MAIN();
