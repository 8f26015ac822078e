#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "oa/align.hpp"
#include "oa/brownian.hpp"
#include "oa/rng.hpp"

namespace {

oa::Seq random_pm1(long len, oa::CounterRng& rng) {
    oa::Seq s(static_cast<std::size_t>(len));
    for (auto& v : s) v = rng.pm1(0.5);
    return s;
}

void BM_align_kgap(benchmark::State& state) {
    const long n = state.range(0);
    const long k = state.range(1);
    oa::CounterRng rng(1);
    const oa::Seq x = random_pm1(n - k, rng);
    const oa::Seq y = random_pm1(n, rng);
    const oa::PairScorer scorer = oa::PairScorer::product();
    for (auto _ : state)
        benchmark::DoNotOptimize(oa::align_kgap(x, y, scorer, k).score);
    state.SetItemsProcessed(state.iterations() * n * (k + 1));
}
BENCHMARK(BM_align_kgap)
    ->Args({1000, 10})
    ->Args({10000, 10})
    ->Args({10000, 100})
    ->Args({100000, 3});

void BM_lk_functional(benchmark::State& state) {
    const long k = state.range(0);
    const long T = state.range(1);
    oa::CounterRng rng(2);
    const oa::BrownianPaths paths = oa::sample_bm(k, T, rng);
    for (auto _ : state) benchmark::DoNotOptimize(oa::lk_functional(paths));
    state.SetItemsProcessed(state.iterations() * (k + 1) * (T + 1));
}
BENCHMARK(BM_lk_functional)->Args({3, 576})->Args({25, 17600})->Args({50, 51200});

void BM_sample_bm(benchmark::State& state) {
    const long k = state.range(0);
    const long T = state.range(1);
    oa::CounterRng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(oa::sample_bm(k, T, rng).at(0, T));
    state.SetItemsProcessed(state.iterations() * (k + 1) * T);
}
BENCHMARK(BM_sample_bm)->Args({25, 17600});

}  // namespace

BENCHMARK_MAIN();
