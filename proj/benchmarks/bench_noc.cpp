#include <benchmark/benchmark.h>

#include "nocs/noc.hpp"

namespace {

// Cycles per second of a loaded mesh under uniform traffic.
void BM_NetworkStep(benchmark::State& state) {
    nocs::MeshConfig c;
    c.width = c.height = static_cast<int>(state.range(0));
    c.quantum_cycles = 200;
    c.total_quanta = 50;
    nocs::PatternSpec spec;
    spec.rate = 2.0;
    const auto schedule = nocs::gen_uniform(c.dims(), spec, {c.quantum_cycles, c.total_quanta});
    for (auto _ : state) {
        nocs::Network net(c);
        std::size_t next = 0;
        for (std::uint64_t cycle = 0; cycle < c.total_cycles(); ++cycle) {
            while (next < schedule.size() && schedule[next].cycle == cycle) net.enqueue(schedule[next++]);
            benchmark::DoNotOptimize(net.step());
        }
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(c.total_cycles()));
}
BENCHMARK(BM_NetworkStep)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
