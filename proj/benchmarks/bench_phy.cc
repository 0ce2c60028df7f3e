// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/propagation.h"
#include "rachsim/rach_phy.h"
#include "rachsim/random.h"

#include <benchmark/benchmark.h>

#include <vector>

using namespace rachsim;

static void
BM_PathlossDb(benchmark::State& state)
{
    double d = 1.0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(PathlossDb(d, 900.0, 30.0, 7.5));
        d = d < 700.0 ? d + 0.37 : 1.0;
    }
}
BENCHMARK(BM_PathlossDb);

static void
BM_DetectPreambles(benchmark::State& state)
{
    const auto ues = static_cast<int>(state.range(0));
    const auto curve = DetectionCurve::Default();
    RngStream rng(3);
    std::vector<PreambleTransmission> txs(static_cast<std::size_t>(ues));
    for (int u = 0; u < ues; ++u)
    {
        txs[u].ueId = static_cast<std::uint32_t>(u);
        txs[u].preambleIndex = static_cast<int>(rng.UniformInt(0, 53));
        txs[u].snrAtEnbDb = rng.Uniform(-22.0, 0.0);
        txs[u].distanceM = rng.Uniform(5.0, 350.0);
    }
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(DetectPreambles(txs, curve, rng));
    }
    state.SetItemsProcessed(state.iterations() * ues);
}
BENCHMARK(BM_DetectPreambles)->Arg(10)->Arg(100)->Arg(600);
