#include <cmath>

#include <benchmark/benchmark.h>

#include "bpdo/decomp.hpp"
#include "bpdo/ensemble.hpp"
#include "bpdo/grid.hpp"
#include "bpdo/op.hpp"
#include "bpdo/plane_wave.hpp"
#include "bpdo/spaces.hpp"
#include "bpdo/verify.hpp"

using namespace bpdo;

namespace {

SampledField gaussian(const GridSpec& g, double w) {
  return declare_band_limit(sample_space(g, [=](double x) { return cplx(std::exp(-x * x / (2.0 * w * w))); }),
                            g.xi_halfwidth / 2.0);
}

void BM_FourierForward(benchmark::State& st) {
  const SampledField f = gaussian(default_grid(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(fourier_forward(f));
}
BENCHMARK(BM_FourierForward);

void BM_BilinearApply(benchmark::State& st) {
  const GridSpec g = symbol_test_grid();
  Rng rng = trial_rng(1, 0, 0);
  const SampledSymbol s = random_plane_wave_symbol(rng, {1, 1, 1}, 16).sample(g);
  const SampledField f = gaussian(g, 1.5);
  for (auto _ : st) benchmark::DoNotOptimize(bilinear_apply(s, f, f));
}
BENCHMARK(BM_BilinearApply)->Unit(benchmark::kMillisecond);

void BM_STransform(benchmark::State& st) {
  const SampledField f = gaussian(default_grid(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(s_transform(f));
}
BENCHMARK(BM_STransform);

void BM_ModulationNorm(benchmark::State& st) {
  const SampledField f = gaussian(default_grid(), 2.0);
  const DecompPair pair = DecompPair::build(1);
  for (auto _ : st) benchmark::DoNotOptimize(modulation_norm(f, 2.0, 1.0, pair));
}
BENCHMARK(BM_ModulationNorm);

void BM_AmalgamNorm(benchmark::State& st) {
  const SampledField f = gaussian(default_grid(), 2.0);
  for (auto _ : st) benchmark::DoNotOptimize(amalgam_norm(f, 2.0, 1.0));
}
BENCHMARK(BM_AmalgamNorm);

void BM_SearchObjective(benchmark::State& st) {
  const AtomDictionary dict = build_atom_dictionary(default_grid());
  Rng rng = trial_rng(2, 0, 0);
  const PlaneWaveSymbol s = random_plane_wave_symbol(rng, {2, 2, 2}, default_plane_wave_terms({2, 2, 2}));
  const BilinearSearch search(s, dict, 0.25, 0.25);
  std::vector<cplx> a(dict.atoms.size()), b(dict.atoms.size());
  for (auto& v : a) v = complex_normal(rng);
  for (auto& v : b) v = complex_normal(rng);
  for (auto _ : st) benchmark::DoNotOptimize(search.objective(a, b));
}
BENCHMARK(BM_SearchObjective);

void BM_ProductWeak(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  std::vector<double> f(2 * n + 1), A(2 * n + 1, 1.0), A0(4 * n + 1, 1.0);
  for (int v = -n; v <= n; ++v) f[v + n] = std::pow(1.0 + v * v, -0.125);
  for (auto _ : st) benchmark::DoNotOptimize(check_product_lweak(f, f, A0, A, A, 4.0, 4.0));
}
BENCHMARK(BM_ProductWeak)->Arg(32)->Arg(128);

}  // namespace
BENCHMARK_MAIN();
