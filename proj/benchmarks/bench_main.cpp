#include <benchmark/benchmark.h>

#include <cmath>

#include "levelset/conjugate.hpp"
#include "levelset/factory.hpp"
#include "levelset/rng.hpp"
#include "levelset/transforms.hpp"

using namespace levelset;

namespace {

Market make_uniswap(double gamma = 1.0) {
    MarketSpec spec;
    spec.n = 2;
    spec.family = "uniswap";
    spec.initial_reserves = {4.0, 9.0};
    spec.fee_gamma = gamma;
    return make_market(spec).market;
}

void BM_SolveMonotone(benchmark::State& state) {
    auto f = [](double x) { return 2.0 * std::exp(-1.0 / x); };
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_monotone(f, 1.0, 0.1, 1.0, Direction::Increasing));
}
BENCHMARK(BM_SolveMonotone);

void BM_PerspectiveEval(benchmark::State& state) {
    PotentialFunction phi = perspective_potential(lmsr(2, 1.0));
    Rng rng(1);
    Bundle q = rng.positive_bundle(2, 0.1, 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(phi(q));
}
BENCHMARK(BM_PerspectiveEval);

void BM_CostFromPotentialEval(benchmark::State& state) {
    CostFunction C = cost_from_potential_level(uniswap(), 1.0);
    Bundle q{0.3, -0.7};
    for (auto _ : state) benchmark::DoNotOptimize(C(q));
}
BENCHMARK(BM_CostFromPotentialEval);

void BM_ConjugateOnSimplex(benchmark::State& state) {
    Bundle q{0.4, -0.2};
    for (auto _ : state)
        benchmark::DoNotOptimize(conjugate_on_simplex(brier_cost_generating, q));
}
BENCHMARK(BM_ConjugateOnSimplex);

void BM_Liquidate(benchmark::State& state) {
    Market m = make_uniswap();
    Bundle give{0.0, 3.0}, want{1.0, 0.0};
    for (auto _ : state) benchmark::DoNotOptimize(m.liquidate(give, want));
}
BENCHMARK(BM_Liquidate);

void BM_ApplyFeeTrade(benchmark::State& state) {
    Market m = make_uniswap(0.5);
    Bundle r{2.0, -3.0};
    for (auto _ : state) benchmark::DoNotOptimize(m.apply(r));
}
BENCHMARK(BM_ApplyFeeTrade);

}  // namespace

BENCHMARK_MAIN();
