#include <benchmark/benchmark.h>

#include "memcap/capacities.hpp"
#include "memcap/channel.hpp"
#include "memcap/ergodic.hpp"
#include "memcap/toeplitz.hpp"

namespace {

using namespace memcap;

void BM_ChannelCoefficients(benchmark::State& state) {
    const ChannelParams params{0.9, state.range(0) / 100.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(channel_coefficients(params));
    }
}
BENCHMARK(BM_ChannelCoefficients)->Arg(10)->Arg(50)->Arg(80);

void BM_ToeplitzSingularValues(benchmark::State& state) {
    const ChannelParams params{0.7, 0.3};
    const CoefficientSequence coeffs = channel_coefficients(params);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(singular_values(build_toeplitz(coeffs, n)));
    }
    state.SetComplexityN(n);
}
BENCHMARK(BM_ToeplitzSingularValues)
    ->Arg(64)
    ->Arg(256)
    ->Arg(1024)
    ->Unit(benchmark::kMillisecond)
    ->Complexity();

void BM_AsymptoticCapacity(benchmark::State& state) {
    const ChannelParams params{0.8, 0.2};
    const CapacityKind kind =
        state.range(0) == 0 ? CapacityKind::Qubit : CapacityKind::Key;
    for (auto _ : state) {
        benchmark::DoNotOptimize(asymptotic_capacity(params, kind));
    }
}
BENCHMARK(BM_AsymptoticCapacity)->Arg(0)->Arg(1);

void BM_ExactSumBound(benchmark::State& state) {
    const ChannelParams params{0.7, 0.3};
    const ErrorBudget eps(0.1);
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            exact_sum_lower_bound(params, n, eps, CapacityKind::Ebit));
    }
}
BENCHMARK(BM_ExactSumBound)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ErgodicReport(benchmark::State& state) {
    const ChannelParams params{0.7, 0.3};
    const int n = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            ergodic_report(params, CapacityKind::Ebit, n));
    }
}
BENCHMARK(BM_ErgodicReport)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_UsesNeeded(benchmark::State& state) {
    const ChannelParams params{0.9, 0.5};
    const ErrorBudget eps(0.05);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            uses_needed(params, eps, CapacityKind::Key, 100.0));
    }
}
BENCHMARK(BM_UsesNeeded);

}  // namespace

BENCHMARK_MAIN();
