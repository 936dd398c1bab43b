#include <benchmark/benchmark.h>

#include <vector>

#include "sitmfc/experiments.hpp"
#include "sitmfc/mfc.hpp"
#include "sitmfc/plant.hpp"
#include "sitmfc/pulse.hpp"

namespace {

void BM_Rk4Step(benchmark::State& state) {
    const sit::ModelParams p;
    sit::SystemState x = sit::wild_equilibrium(p).state;
    x.x4 = 1e5;
    const sit::ControlSignal none;
    for (auto _ : state) {
        benchmark::DoNotOptimize(x = sit::step_rk4(x, p, none, 0.0, 0.01));
    }
}
BENCHMARK(BM_Rk4Step);

void BM_FEstimate(benchmark::State& state) {
    const auto n = static_cast<int>(state.range(0));
    std::vector<sit::Sample> w;
    for (int i = 0; i <= n; ++i) w.push_back({double(i), 1000.0 - 3.0 * i, 5e4});
    for (auto _ : state) {
        benchmark::DoNotOptimize(sit::f_estimate(w, -1e-3, double(n)));
    }
}
BENCHMARK(BM_FEstimate)->Arg(5)->Arg(7)->Arg(30);

void BM_PlanStep(benchmark::State& state) {
    const sit::PulseConfig cfg;
    sit::PulseTrain history;
    for (std::int64_t d = 0; d < 399; d += 3) history = sit::plan_step(1e5, std::move(history), d, cfg);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sit::predict_tail_mean(history, cfg.delta_S_nominal, 399, cfg.period_J));
    }
}
BENCHMARK(BM_PlanStep);

void BM_RunScenario(benchmark::State& state) {
    const sit::Scenario s = sit::nominal_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sit::run_scenario(s));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

void BM_MonteCarlo(benchmark::State& state) {
    sit::MonteCarloConfig mc;
    mc.n_runs = 100;
    mc.threads = static_cast<unsigned>(state.range(0));
    const sit::Scenario base = sit::nominal_scenario();
    for (auto _ : state) {
        benchmark::DoNotOptimize(sit::run_monte_carlo(mc, base));
    }
}
BENCHMARK(BM_MonteCarlo)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
