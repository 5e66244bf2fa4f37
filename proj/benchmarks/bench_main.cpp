#include <benchmark/benchmark.h>

#include <vector>

#include "stdpgen/encoding.hpp"
#include "stdpgen/gaussian_process.hpp"
#include "stdpgen/kde.hpp"
#include "stdpgen/plasticity.hpp"
#include "stdpgen/stable.hpp"
#include "stdpgen/tail_index.hpp"
#include "stdpgen/topology.hpp"

using namespace stdpgen;

static void BM_StableSampler(benchmark::State& state) {
  Rng rng(1);
  const double alpha = static_cast<double>(state.range(0)) / 10.0;
  for (auto _ : state) benchmark::DoNotOptimize(sample_alpha_stable(alpha, 1.0, rng));
}
BENCHMARK(BM_StableSampler)->Arg(12)->Arg(15)->Arg(20);

static void BM_TailIndex(benchmark::State& state) {
  Rng rng(2);
  const auto x = sample_alpha_stable(1.5, 1.0, static_cast<std::size_t>(state.range(0)), rng);
  for (auto _ : state) benchmark::DoNotOptimize(estimate_tail_index(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TailIndex)->Arg(1 << 16)->Arg(1 << 20);

static void BM_OuLevy(benchmark::State& state) {
  OuLevyParams p;
  p.steps = 100000;
  p.dims = 1;
  Rng rng(3);
  for (auto _ : state) benchmark::DoNotOptimize(simulate_ou_levy(p, rng));
}
BENCHMARK(BM_OuLevy)->Unit(benchmark::kMillisecond);

static void BM_KdeGrid(benchmark::State& state) {
  Rng rng(4);
  std::normal_distribution<double> n01;
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (auto& v : x) v = n01(rng);
  const double t = kde_bandwidth(x);
  for (auto _ : state) benchmark::DoNotOptimize(kde_grid(x, t, -4, 4, 256));
}
BENCHMARK(BM_KdeGrid)->Arg(1000)->Arg(20000);

static void BM_StdpWindow(benchmark::State& state) {
  const auto cfg = StdpConfig::defaults(StdpRule::kLog);
  double w = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(window_h(cfg, w, -3.0) + window_h(cfg, w, 5.0));
    w = w < 1.0 ? w + 1e-3 : 0.1;
  }
}
BENCHMARK(BM_StdpWindow);

static void BM_Presentation(benchmark::State& state) {
  NetworkConfig cfg;
  cfg.n_exc = static_cast<std::size_t>(state.range(0));
  cfg.n_inh = cfg.n_exc;
  Network net = build_network(cfg);
  ImageSample img{std::vector<float>(784, 0.0f), 3};
  for (std::size_t r = 8; r < 20; ++r)
    for (std::size_t c = 10; c < 18; ++c) img.pixels[r * 28 + c] = 255.0f;
  Rng rng(5);
  const auto rates = image_rates(img, 0);
  for (auto _ : state) {
    const auto sched = poisson_schedule(rates, 350.0, cfg.dt, rng);
    benchmark::DoNotOptimize(run_presentation(net, sched, 350.0, Plasticity::kOn));
    rest_network(net, 150.0);
  }
}
BENCHMARK(BM_Presentation)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);

static void BM_GpFit(benchmark::State& state) {
  Rng rng(6);
  std::uniform_real_distribution<double> u;
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<std::vector<double>> x(n, std::vector<double>(9));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : x[i]) v = u(rng);
    y[i] = x[i][0] * x[i][0] + x[i][1];
  }
  for (auto _ : state) benchmark::DoNotOptimize(GaussianProcess::fit(x, y, rng));
}
BENCHMARK(BM_GpFit)->Arg(12)->Arg(30)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
