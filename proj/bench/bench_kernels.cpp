// Serial reference vs OpenMP kernels: the lambda swap and the per-element
// pullbacks of one backward iteration. Thread count is the second argument
// of each benchmark, e.g. BM_LambdaParallel/8/4 is 8 components on 4 threads.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "confmc/antichain.hpp"
#include "confmc/generators.hpp"
#include "confmc/operators.hpp"
#include "support.hpp"

using namespace confmc;

namespace {

Mixture<Dist<int>> nested(std::size_t components) {
    confmc::testing::Rng rng(components);
    return confmc::testing::rand_nested(rng, components, 4);
}

void BM_LambdaSerial(benchmark::State& state) {
    auto dd = nested(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_op_serial(dd));
    }
}

void BM_LambdaParallel(benchmark::State& state) {
    auto dd = nested(static_cast<std::size_t>(state.range(0)));
    int before = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(lambda_op(dd));
    }
    omp_set_num_threads(before);
}

void backward(benchmark::State& state, bool parallel) {
    auto m = gen_exam({static_cast<std::size_t>(state.range(0)), 2, Rat(1, 2), 42});
    auto h = exam_grade_target(m, Rat(7, 10));
    auto d0 = Configuration::dirac(m.num_states(), 0);
    BackwardOptions opt;
    opt.parallel = parallel;
    int before = omp_get_max_threads();
    omp_set_num_threads(static_cast<int>(state.range(1)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(backward_reach(m, d0, h, opt));
    }
    omp_set_num_threads(before);
}

void BM_BackwardSerial(benchmark::State& state) { backward(state, false); }
void BM_BackwardParallel(benchmark::State& state) { backward(state, true); }

}  // namespace

BENCHMARK(BM_LambdaSerial)->Args({6, 1})->Args({8, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LambdaParallel)->Args({6, 2})->Args({6, 4})->Args({8, 2})->Args({8, 4})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BackwardSerial)->Args({5, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BackwardParallel)->Args({5, 2})->Args({5, 4})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
