// bench_kernels.cpp — serial vs OpenMP subset-enumeration kernel, and row
// assembly throughput. Run: ./bench_kernels [--benchmark_filter=...]

#include "sampleobs/obsmatrix.hpp"
#include "sampleobs/oracle.hpp"

#include <benchmark/benchmark.h>

#include <numeric>

using namespace sampleobs;

namespace {

SystemSpec bench_system() { return make_worst_case_system(3, 0.343); }

void enumeration(benchmark::State& state, Execution exec) {
    const SystemSpec system = bench_system();
    const std::int64_t T = state.range(0);
    for (auto _ : state) {
        const WindowStudy study = min_samples_in_window(system, 0, T, 0, 0, exec);
        benchmark::DoNotOptimize(study.min_observable_size);
    }
}

void enumeration_serial(benchmark::State& state) { enumeration(state, Execution::serial); }
void enumeration_parallel(benchmark::State& state) { enumeration(state, Execution::parallel); }

void row_assembly(benchmark::State& state) {
    const SystemSpec system = make_worst_case_system(9, 0.1314);
    std::vector<std::int64_t> instants(static_cast<std::size_t>(state.range(0)));
    std::iota(instants.begin(), instants.end(), 0);
    const Schedule schedule = Schedule::from_instants(std::move(instants));
    for (auto _ : state) {
        const ObservabilityMatrix m = observability_matrix(system, schedule);
        benchmark::DoNotOptimize(m.rows.data());
    }
}

}  // namespace

BENCHMARK(enumeration_serial)->Arg(12)->Arg(15)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK(enumeration_parallel)->Arg(12)->Arg(15)->Arg(18)->Unit(benchmark::kMillisecond);
BENCHMARK(row_assembly)->Arg(64)->Arg(512)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
