#include <benchmark/benchmark.h>

#include "nocs/clustering.hpp"
#include "nocs/ids.hpp"

namespace {

void BM_KMedoidsShapes(benchmark::State& state) {
    nocs::ShapeBenchmarkOptions opt;
    opt.per_family = static_cast<int>(state.range(0));
    const auto bench = nocs::gen_shape_benchmark(opt);
    const auto metric = state.range(1) ? nocs::Metric::dtw() : nocs::Metric::euclidean();
    for (auto _ : state) benchmark::DoNotOptimize(nocs::kmedoids(bench.data, {6, metric, 7, 100}));
}
BENCHMARK(BM_KMedoidsShapes)->Args({20, 0})->Args({20, 1})->Args({50, 1})->Unit(benchmark::kMillisecond);

void BM_KMeansShapes(benchmark::State& state) {
    nocs::ShapeBenchmarkOptions opt;
    opt.per_family = static_cast<int>(state.range(0));
    const auto bench = nocs::gen_shape_benchmark(opt);
    for (auto _ : state) benchmark::DoNotOptimize(nocs::kmeans(bench.data, {6, nocs::Metric::euclidean(), 7, 100, 0.0}));
}
BENCHMARK(BM_KMeansShapes)->Arg(20)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_AgglomerativeShapes(benchmark::State& state) {
    nocs::ShapeBenchmarkOptions opt;
    opt.per_family = static_cast<int>(state.range(0));
    const auto bench = nocs::gen_shape_benchmark(opt);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nocs::agglomerative(bench.data, nocs::Metric::dtw(), nocs::Linkage::Average, 6));
    }
}
BENCHMARK(BM_AgglomerativeShapes)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
