#include <benchmark/benchmark.h>

#include "lax/baker.hpp"
#include "lax/spectral.hpp"

using namespace lax;

namespace {

ConfigPtr bench_config() {
  auto alg = make_algebra(Family::C, 2);
  IntVector h(4);
  h << 1, 0, 0, -1;
  return make_config(alg, {{Complex(0.4, 0.1), 1}}, {{Complex(-0.8, 0.3), h}});
}

void BM_char_coeffs(benchmark::State& state) {
  auto alg = make_algebra(Family::D, 3);
  Rng rng(3);
  Matrix l = random_member(alg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(char_coeffs(l));
}
BENCHMARK(BM_char_coeffs);

void BM_pfaffian(benchmark::State& state) {
  auto alg = make_algebra(Family::D, 3);
  Rng rng(3);
  Matrix l = random_member(alg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(pfaffian(l, alg));
}
BENCHMARK(BM_pfaffian);

void BM_space_build(benchmark::State& state) {
  auto cfg = bench_config();
  for (auto _ : state) benchmark::DoNotOptimize(build_constraint_system(cfg));
}
BENCHMARK(BM_space_build);

void BM_curve_fit(benchmark::State& state) {
  auto cfg = bench_config();
  LaxElement l = sample_lax(build_constraint_system(cfg), 5u);
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_rational(l, 2));
}
BENCHMARK(BM_curve_fit);

void BM_theta_g2(benchmark::State& state) {
  ThetaParams p;
  p.genus = 2;
  p.omega = Matrix(2, 2);
  p.omega << Complex(0.1, 1.3), Complex(0.05, 0.2), Complex(0.05, 0.2), Complex(-0.2, 1.1);
  Vector z(2);
  z << Complex(0.3, 0.1), Complex(-0.2, 0.25);
  for (auto _ : state) benchmark::DoNotOptimize(theta(z, p));
}
BENCHMARK(BM_theta_g2);

}  // namespace

BENCHMARK_MAIN();
