// Hot-path timings: stencils, the nested biharmonic solve, the delay-force
// gather and one full semi-implicit step.
#include <benchmark/benchmark.h>

#include <random>

#include "vkdelay/attractor.hpp"
#include "vkdelay/biharmonic.hpp"
#include "vkdelay/dynamics.hpp"

using namespace vkd;

namespace {

ScalarField smooth(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 gen = seeded_stream(seed, 0);
  return random_smooth_field(g, gen);
}

void BM_laplacian(benchmark::State& state) {
  const Grid g = Grid::unit_square(int(state.range(0)));
  const ScalarField u = smooth(g, 1);
  for (auto _ : state) benchmark::DoNotOptimize(laplacian(u));
  state.SetItemsProcessed(state.iterations() * int64_t(g.size()));
}

void BM_bilaplacian(benchmark::State& state) {
  const Grid g = Grid::unit_square(int(state.range(0)));
  const ScalarField u = smooth(g, 2);
  for (auto _ : state) benchmark::DoNotOptimize(bilaplacian(u));
  state.SetItemsProcessed(state.iterations() * int64_t(g.size()));
}

void BM_bracket(benchmark::State& state) {
  const Grid g = Grid::unit_square(int(state.range(0)));
  const ScalarField u = smooth(g, 3), w = smooth(g, 4);
  for (auto _ : state) benchmark::DoNotOptimize(vk_bracket(u, w));
  state.SetItemsProcessed(state.iterations() * int64_t(g.size()));
}

void BM_airy(benchmark::State& state) {
  const Grid g = Grid::unit_square(int(state.range(0)));
  const ScalarField u = smooth(g, 5);
  for (auto _ : state) benchmark::DoNotOptimize(airy(u, u, 1e-8));
}

void BM_q_delay(benchmark::State& state) {
  const Grid g = Grid::unit_square(int(state.range(0)));
  const double t_star = compute_t_star(0.5, g);
  const DelayConfig cfg(0.5, t_star, 32, t_star / 16.0);
  DelayHistory hist(g, cfg);
  hist.seed_constant(smooth(g, 6), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(q_delay(hist, cfg));
}

void BM_step(benchmark::State& state) {
  const Grid g = Grid::unit_square(int(state.range(0)));
  PhysicsConfig phys(g);
  phys.u_flow = 0.5;
  const double dt = 0.5 * g.h();
  const DelayConfig cfg = DelayConfig::certified(phys.u_flow, g, 16, dt);
  DelayHistory hist(g, cfg);
  ScalarField u0 = smooth(g, 7);
  u0 *= 0.05;
  hist.seed_constant(u0, 0.0);
  PlateState st(g);
  st.u = u0;
  for (auto _ : state) {
    st = step(st, hist, phys, cfg, dt, 1e-8);
    benchmark::DoNotOptimize(st.u.data());
  }
}

}  // namespace

BENCHMARK(BM_laplacian)->Arg(31)->Arg(63)->Arg(127);
BENCHMARK(BM_bilaplacian)->Arg(31)->Arg(63)->Arg(127);
BENCHMARK(BM_bracket)->Arg(31)->Arg(63)->Arg(127);
BENCHMARK(BM_airy)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_q_delay)->Arg(15)->Arg(31)->Arg(63)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_step)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
