#include <benchmark/benchmark.h>

#include "orthopart/cobordism.hpp"
#include "orthopart/masspart.hpp"
#include "orthopart/random.hpp"
#include "orthopart/solver.hpp"

using namespace orthopart;

namespace {

WeightedPointMeasure gaussian(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> c(n * d);
  for (auto& x : c) x = rng.normal();
  return WeightedPointMeasure(d, c);
}

void BM_PowerOfP(benchmark::State& state) {
  const auto k = static_cast<unsigned>(state.range(0));
  const auto m = static_cast<unsigned>(state.range(1));
  const auto cert = pstar_certificate(m, k, 2);
  const RingSpec ring(cert.caps);
  const auto forms = P_power_forms(k, 2, m);
  for (auto _ : state) benchmark::DoNotOptimize(product_of_forms(forms, ring, 1u << 26));
}
BENCHMARK(BM_PowerOfP)->Args({3, 4})->Args({4, 2})->Args({4, 3})->Unit(benchmark::kMillisecond);

void BM_Criterion(benchmark::State& state) {
  const auto k = static_cast<unsigned>(state.range(0));
  const auto cert = pstar_certificate(7, k, 2);
  std::vector<GroupElement> t;
  for (const auto& b : P_power_forms(k, 2, 7)) t.emplace_back(b);
  for (auto _ : state) benchmark::DoNotOptimize(criterion_spheres(t, cert.caps));
}
BENCHMARK(BM_Criterion)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_GEval(benchmark::State& state) {
  const auto mu = gaussian(static_cast<std::size_t>(state.range(0)), 3, 1);
  const HyperplaneTuple t({Hyperplane::from_coefficients({0.1, 1, 0, 0}), Hyperplane::from_coefficients({0, 0, 1, 0}),
                           Hyperplane::from_coefficients({-0.2, 0, 0, 1})});
  const EvalOptions opt{.mode = state.range(1) ? EvalMode::exact : EvalMode::floating};
  for (auto _ : state) benchmark::DoNotOptimize(g_eval(mu, t, opt));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GEval)->Args({100000, 0})->Args({10000, 1});

void BM_Bisect(benchmark::State& state) {
  const auto mu = gaussian(static_cast<std::size_t>(state.range(0)), 2, 2);
  const std::vector<double> dir{0.6, 0.8};
  for (auto _ : state) benchmark::DoNotOptimize(bisect_offset(mu, dir));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Bisect)->Arg(1000)->Arg(100000);

void BM_SolveGaussian(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  const std::vector<WeightedPointMeasure> ms{gaussian(100000, d, 3)};
  const double tol = 4.0 / std::sqrt(100000.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_orthogonal(ms, d, 2, {.residual_tol = tol * tol, .verify_tol = tol}));
}
BENCHMARK(BM_SolveGaussian)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_Pancake(benchmark::State& state) {
  Rng rng(4);
  std::vector<double> c(2 * 1000);
  for (auto& x : c) x = rng.uniform(-1, 1);
  const WeightedPointMeasure mu(2, c);
  for (auto _ : state) benchmark::DoNotOptimize(pancake_solve(mu));
}
BENCHMARK(BM_Pancake)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
