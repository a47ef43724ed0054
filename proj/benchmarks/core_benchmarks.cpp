#include <benchmark/benchmark.h>

#include "qmccf/discrepancy.hpp"
#include "qmccf/estimators.hpp"
#include "qmccf/sequences.hpp"
#include "qmccf/surrogate.hpp"

namespace {

using namespace qmccf;

void BM_GenerateHalton(benchmark::State& state) {
    const SequenceSpec spec{SequenceKind::Halton, 2};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(spec, n));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateHalton)->Range(1 << 6, 1 << 14);

void BM_GenerateScrambledShifted(benchmark::State& state) {
    const SequenceSpec spec{SequenceKind::ScrambledShiftedHalton, 2, 42};
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate(spec, n));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateScrambledShifted)->Range(1 << 6, 1 << 14);

void BM_StarDiscrepancy1d(benchmark::State& state) {
    const auto ps = generate({SequenceKind::ScrambledShiftedHalton, 1, 7}, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(star_discrepancy_1d(ps));
    }
}
BENCHMARK(BM_StarDiscrepancy1d)->Range(1 << 6, 1 << 14);

void BM_StarDiscrepancyExact2d(benchmark::State& state) {
    const auto ps = generate({SequenceKind::Halton, 2}, state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(star_discrepancy_exact(ps));
    }
}
BENCHMARK(BM_StarDiscrepancyExact2d)->Range(1 << 4, 1 << 8);

void BM_FitGridSurrogate(benchmark::State& state) {
    const TestFunction f = builtin("fig1", 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_grid_surrogate(f, static_cast<int>(state.range(0))));
    }
}
BENCHMARK(BM_FitGridSurrogate)->Range(1 << 4, 1 << 10);

void BM_FitKernelSurrogate(benchmark::State& state) {
    const TestFunction f = builtin("fig1", 1);
    const PointSet nodes = surrogate_node_set(1, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_kernel_surrogate(f, nodes, 0.1, 1e-8));
    }
}
BENCHMARK(BM_FitKernelSurrogate)->Range(1 << 4, 1 << 8);

void BM_RunEstimatorRqmcCf(benchmark::State& state) {
    const TestFunction f = builtin("fig1", 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_estimator(Method::RqmcCf, f, state.range(0), 20, 12345));
    }
}
BENCHMARK(BM_RunEstimatorRqmcCf)->Range(1 << 6, 1 << 12);

}  // namespace

BENCHMARK_MAIN();
