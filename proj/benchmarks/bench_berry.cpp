#include <benchmark/benchmark.h>

#include <random>

#include "berry/eigensystem.hpp"
#include "berry/wilson.hpp"
#include "berry/xy_model.hpp"

namespace {

berry::Matrix random_hermitian(int d, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> dist;
  berry::Matrix a(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a(i, j) = berry::Complex(dist(rng), dist(rng));
  }
  return (a + a.adjoint()) / 2.0;
}

void BM_eigensystem(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const berry::Matrix h = random_hermitian(d, 42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(berry::eigensystem(h));
  }
}
BENCHMARK(BM_eigensystem)->Arg(8)->Arg(32)->Arg(128);

void BM_wilson_spin_half(benchmark::State& state) {
  const berry::HamiltonianFamily family = berry::make_spin_half();
  const double theta = 1.0;
  const berry::Loop loop = berry::Loop::coordinate_circle(
      {0.0, 0.0, std::cos(theta)}, std::sin(theta), 0, 1);
  berry::WilsonOptions opts;
  opts.tol = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(berry::wilson_loop_phase(family, loop, 0, opts));
  }
}
BENCHMARK(BM_wilson_spin_half);

void BM_xy_total_phase(benchmark::State& state) {
  const berry::xy::ModeGrid grid(static_cast<int>(state.range(0)));
  const berry::xy::XYPoint point(0.3, 0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(berry::xy::total_berry_phase(point, grid));
  }
}
BENCHMARK(BM_xy_total_phase)->Arg(1000)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
