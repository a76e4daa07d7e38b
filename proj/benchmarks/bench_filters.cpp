// microbenchmarks for the hot paths: lag-weight construction, the daily
// filters, loss evaluation, and a full maximum-likelihood fit
#include <benchmark/benchmark.h>

#include "dmem/evaluation.hpp"
#include "dmem/inference.hpp"
#include "dmem/mem.hpp"
#include "dmem/midas.hpp"
#include "dmem/model.hpp"

using namespace dmem;

namespace {

PanelSeries bench_panel(std::size_t n, std::uint64_t seed) {
  SimulateOptions o;
  o.n_days = n;
  o.shape = 5.0;
  o.seed = seed;
  return simulate_amem(ShortRunParams{0.10, 0.12, 0.75}, 10.0, o);
}

PanelSeries bench_midas_panel(std::size_t n, std::uint64_t seed) {
  SimulateOptions o;
  o.n_days = n;
  o.shape = 5.0;
  o.seed = seed;
  MidasLongRunParams l;
  l.m = 2.0;
  l.zeta = 0.3;
  l.lag = BetaLag{12, 1.0, 3.0};
  return simulate_mem_midas(ShortRunParams{0.08, 0.10, 0.75}, l, o);
}

void bm_beta_lag_weights(benchmark::State& state) {
  const BetaLag spec{static_cast<int>(state.range(0)), 1.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(beta_lag_weights(spec));
}
BENCHMARK(bm_beta_lag_weights)->Arg(12)->Arg(264);

void bm_filter_amem(benchmark::State& state) {
  const PanelSeries panel = bench_panel(static_cast<std::size_t>(state.range(0)), 1);
  const ShortRunParams p{0.10, 0.12, 0.75};
  for (auto _ : state) benchmark::DoNotOptimize(filter_amem(panel, p, 10.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_filter_amem)->Arg(3000)->Arg(30000);

void bm_filter_component(benchmark::State& state) {
  const PanelSeries panel = bench_panel(static_cast<std::size_t>(state.range(0)), 2);
  const ShortRunParams s{0.06, 0.10, 0.70};
  LongRunComponentParams l;
  l.omega_tau = 0.4;
  l.alpha1_tau = 0.05;
  l.gamma1_tau = 0.02;
  l.beta1_tau = 0.90;
  for (auto _ : state)
    benchmark::DoNotOptimize(filter_component(panel, s, l, nullptr, 10.0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_filter_component)->Arg(3000)->Arg(30000);

void bm_filter_mem_midas(benchmark::State& state) {
  const PanelSeries panel = bench_midas_panel(static_cast<std::size_t>(state.range(0)), 3);
  const ShortRunParams s{0.08, 0.10, 0.75};
  MidasLongRunParams l;
  l.m = 2.0;
  l.zeta = 0.3;
  l.lag = BetaLag{12, 1.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(filter_mem_midas(panel, s, l));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_filter_mem_midas)->Arg(3000)->Arg(30000);

void bm_qlike_panel(benchmark::State& state) {
  const PanelSeries panel = bench_panel(static_cast<std::size_t>(state.range(0)), 4);
  const MeanPath path = filter_amem(panel, ShortRunParams{0.10, 0.12, 0.75}, 10.0);
  const std::vector<double>& x = panel.rvol();
  for (auto _ : state) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += qlike(x[i], path.mu[i]);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(bm_qlike_panel)->Arg(3000);

void bm_fit_amem_ml(benchmark::State& state) {
  const PanelSeries panel = bench_panel(static_cast<std::size_t>(state.range(0)), 5);
  for (auto _ : state) {
    MemFitOptions o;
    benchmark::DoNotOptimize(fit_mem(amem_problem(panel), o));
  }
}
BENCHMARK(bm_fit_amem_ml)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
