// Serial vs OpenMP kernels: the sweep grid and the classical-correlation
// measurement grid.

#include <benchmark/benchmark.h>

#include <omp.h>

#include "triq/correlations.hpp"
#include "triq/steady_state.hpp"
#include "triq/sweep.hpp"

using namespace triq;

namespace {

sweep::RunConfig grid_config() {
    return sweep::parse_config(R"({
        "axes": [{"name": "T_L", "start": 1, "stop": 100, "count": 16},
                 {"name": "g", "start": 0.01, "stop": 0.3, "count": 16}],
        "outputs": ["currents", "channel_split", "p_points"]
    })");
}

void BM_SweepGrid(benchmark::State& state) {
    const sweep::RunConfig config = grid_config();
    sweep::RunOptions opts;
    opts.execution = state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
    opts.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(sweep::run_sweep(config, opts));
    state.SetItemsProcessed(state.iterations() * 256);
}

void BM_MeasurementGrid(benchmark::State& state) {
    SystemParams p;
    p.t_left = 3.0;
    p.t_right = 1.0;
    const BipartiteView v = BipartiteView::from_state(steady_state(p, 1.0));
    MeasurementOptions opts;
    opts.execution = state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
    if (state.range(0) > 0) omp_set_num_threads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(measurement_grid(v, opts));
    state.SetItemsProcessed(state.iterations() * opts.theta_points * opts.phi_points);
}

void thread_args(benchmark::internal::Benchmark* b) {
    b->Arg(0);  // serial reference
    const int max = omp_get_num_procs();
    for (int t = 1; t <= max; t *= 2) b->Arg(t);
    if ((max & (max - 1)) != 0) b->Arg(max);
}

} // namespace

BENCHMARK(BM_SweepGrid)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MeasurementGrid)->Apply(thread_args)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
