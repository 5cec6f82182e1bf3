// Serial reference kernels against their OpenMP counterparts.
#include "qsot/chanmap.hpp"
#include "qsot/kernels.hpp"
#include "qsot/random.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace qsot;

// Range argument: matrix dimension d of M_d.

template <bool Parallel>
void bloom(benchmark::State& state) {
    const AlgebraShape s({static_cast<std::size_t>(state.range(0))});
    const auto e = random_cptp(s, s, 1);
    const auto x = random_state(s, 2);
    for (auto _ : state) {
        auto y = Parallel ? kernels::parallel::bloom(e.matrix(), s, x) : kernels::serial::bloom(e.matrix(), s, x);
        benchmark::DoNotOptimize(y);
    }
}

template <bool Parallel>
void partial_trace(benchmark::State& state) {
    const AlgebraShape s({static_cast<std::size_t>(state.range(0))});
    const std::vector<AlgebraShape> factors{s, s, s};
    const auto x = random_state(flatten(factors), 3);
    const std::vector<std::size_t> keep{0, 2};
    for (auto _ : state) {
        auto y = Parallel ? kernels::parallel::partial_trace(factors, x, keep)
                          : kernels::serial::partial_trace(factors, x, keep);
        benchmark::DoNotOptimize(y);
    }
}

template <bool Parallel>
void factor_apply(benchmark::State& state) {
    const AlgebraShape s({static_cast<std::size_t>(state.range(0))});
    const std::vector<AlgebraShape> factors{s, s, s};
    const Vector x = random_state(flatten(factors), 4).coords();
    const auto e = random_cptp(s, s, 5);
    for (auto _ : state) {
        auto y = Parallel ? kernels::parallel::factor_apply(factors, x, 1, e.matrix(), s)
                          : kernels::serial::factor_apply(factors, x, 1, e.matrix(), s);
        benchmark::DoNotOptimize(y);
    }
}

}  // namespace

BENCHMARK(bloom<false>)->Name("bloom/serial")->DenseRange(2, 8, 2);
BENCHMARK(bloom<true>)->Name("bloom/parallel")->DenseRange(2, 8, 2);
BENCHMARK(partial_trace<false>)->Name("partial_trace/serial")->DenseRange(2, 6, 2);
BENCHMARK(partial_trace<true>)->Name("partial_trace/parallel")->DenseRange(2, 6, 2);
BENCHMARK(factor_apply<false>)->Name("factor_apply/serial")->DenseRange(2, 6, 2);
BENCHMARK(factor_apply<true>)->Name("factor_apply/parallel")->DenseRange(2, 6, 2);

BENCHMARK_MAIN();
