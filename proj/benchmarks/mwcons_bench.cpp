#include <benchmark/benchmark.h>

#include <random>

#include "mwc/ear.hpp"
#include "mwc/simulator.hpp"
#include "mwc/wellconfig.hpp"

namespace {

mwc::DirectedGraph ring_with_chords(int m) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < m; ++i) {
        edges.emplace_back(i, (i + 1) % m);
    }
    for (int i = 0; i + 2 < m; i += 3) {
        edges.emplace_back(i, i + 2);
    }
    return mwc::make_symmetric(m, edges);
}

void BM_EarDecomposition(benchmark::State& state) {
    const mwc::DirectedGraph g = ring_with_chords(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mwc::ear_decomposition(g));
    }
}
BENCHMARK(BM_EarDecomposition)->Arg(8)->Arg(32)->Arg(128);

void BM_Chi(benchmark::State& state) {
    const mwc::DirectedGraph g = mwc::make_directed_cycle(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(mwc::chi(g));
    }
}
BENCHMARK(BM_Chi)->DenseRange(3, 8);

void BM_CheckWellConfigured(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(state.range(1));
    const mwc::WeightedNeighborGraph w = mwc::synthesize_symmetric(ring_with_chords(m), n, mwc::KernelMode::free);
    for (auto _ : state) {
        benchmark::DoNotOptimize(mwc::check_well_configured(w));
    }
}
BENCHMARK(BM_CheckWellConfigured)->Args({8, 3})->Args({16, 3})->Args({32, 4});

void BM_FixedStepRound(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = 3;
    const mwc::WeightedNeighborGraph w = mwc::synthesize_symmetric(ring_with_chords(m), n, mwc::KernelMode::free);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    mwc::Vector x0(m * n);
    for (Eigen::Index k = 0; k < x0.size(); ++k) {
        x0(k) = u(rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(mwc::run_fixed_step(w, x0, {100, false}));
    }
    state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_FixedStepRound)->Arg(8)->Arg(32)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
