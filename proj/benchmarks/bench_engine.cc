// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/engine.h"

#include <benchmark/benchmark.h>

using namespace rachsim;

static void
BM_RunSimulation(benchmark::State& state)
{
    SimulationConfig config;
    config.scenario.numMtds = static_cast<int>(state.range(0));
    config.run.mode = state.range(1) ? SimMode::Ideal : SimMode::Realistic;
    int run = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(RunSimulation(config, run++));
    }
}
BENCHMARK(BM_RunSimulation)
    ->ArgsProduct({{100, 600}, {0, 1}})
    ->ArgNames({"N", "ideal"})
    ->Unit(benchmark::kMillisecond);
