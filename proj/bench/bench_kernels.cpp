// Serial reference vs OpenMP kernels on the hot loops.
#include <benchmark/benchmark.h>

#include <cmath>

#include "dyadic/hilbert.hpp"
#include "dyadic/kernels.hpp"
#include "dyadic/rng.hpp"
#include "dyadic/shift.hpp"

using namespace dyadic;

namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.normal();
    return v;
}

template <bool Parallel>
void BM_Toeplitz(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto t = noise(2 * n - 1, 1), x = noise(n, 2);
    std::vector<double> y(n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::parallel::toeplitz_apply(t, x, y);
        else
            kernels::serial::toeplitz_apply(t, x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * n * n));
}

template <bool Parallel>
void BM_MeanOscillation(benchmark::State& state) {
    const int depth = static_cast<int>(state.range(0));
    const auto cells = noise(std::size_t{1} << depth, 3);
    for (auto _ : state) {
        auto out = Parallel ? kernels::parallel::mean_oscillation(cells, depth)
                            : kernels::serial::mean_oscillation(cells, depth);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_MaterializeShift(benchmark::State& state) {
    DyadicGrid g(0.0, 1.0, static_cast<int>(state.range(0)));
    const auto S = shift_S(g);
    for (auto _ : state) {
        auto m = S.materialize(false, Parallel);
        benchmark::DoNotOptimize(m.data());
    }
}

template <bool Parallel>
void BM_AveragedShift(benchmark::State& state) {
    DyadicGrid g(0.0, 1.0, 8);
    AveragedShiftOptions o;
    o.samples = static_cast<int>(state.range(0));
    o.parallel = Parallel;
    for (auto _ : state) {
        auto a = averaged_shift(g, o);
        benchmark::DoNotOptimize(a.kernel.data());
    }
}

}  // namespace

BENCHMARK(BM_Toeplitz<false>)->Arg(1024)->Arg(8192);
BENCHMARK(BM_Toeplitz<true>)->Arg(1024)->Arg(8192);
BENCHMARK(BM_MeanOscillation<false>)->Arg(12)->Arg(16);
BENCHMARK(BM_MeanOscillation<true>)->Arg(12)->Arg(16);
BENCHMARK(BM_MaterializeShift<false>)->Arg(8)->Arg(10);
BENCHMARK(BM_MaterializeShift<true>)->Arg(8)->Arg(10);
BENCHMARK(BM_AveragedShift<false>)->Arg(64);
BENCHMARK(BM_AveragedShift<true>)->Arg(64);

BENCHMARK_MAIN();
