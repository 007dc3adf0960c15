#include <benchmark/benchmark.h>

#include "nocs/distance.hpp"
#include "nocs/rng.hpp"

namespace {

std::vector<double> series(std::uint64_t seed, std::size_t n) {
    nocs::Rng rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform01() * 100;
    return v;
}

void BM_DtwDistance(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = series(1, n), b = series(2, n);
    for (auto _ : state) benchmark::DoNotOptimize(nocs::dtw_distance(a, b));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DtwDistance)->RangeMultiplier(2)->Range(16, 512)->Complexity(benchmark::oNSquared);

void BM_DtwWithPath(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = series(3, n), b = series(4, n);
    for (auto _ : state) {
        const auto r = nocs::dtw(a, b);
        benchmark::DoNotOptimize(nocs::dtw_path(r.matrix));
    }
}
BENCHMARK(BM_DtwWithPath)->Arg(32)->Arg(128);

void BM_Euclidean(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto a = series(5, n), b = series(6, n);
    for (auto _ : state) benchmark::DoNotOptimize(nocs::minkowski(a, b, nocs::MinkowskiOrder(2)));
}
BENCHMARK(BM_Euclidean)->Arg(32)->Arg(512);

}  // namespace
