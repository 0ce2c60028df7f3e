// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/engine.h"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace rachsim;

namespace
{

SimulationConfig
Small(int n, double durationS)
{
    SimulationConfig c;
    c.scenario.numMtds = n;
    c.scenario.simDurationS = durationS;
    c.run.numRuns = 4;
    return c;
}

RunOptions
NoMisses()
{
    RunOptions o;
    o.detectionCurve = DetectionCurve::FromPoints({{0.0, 0.0}});
    return o;
}

bool
SameRecords(const RunResult& a, const RunResult& b)
{
    return a.records == b.records && a.metadata == b.metadata;
}

} // namespace

TEST_CASE("event queue ordering")
{
    EventQueue q;
    Event opportunity;
    opportunity.kind = EventKind::PrachOpportunity;
    opportunity.time = 4;
    q.Push(opportunity, 0);
    Event timer;
    timer.kind = EventKind::TimerExpiry;
    timer.time = 4;
    q.Push(timer, 0);
    Event early;
    early.kind = EventKind::Msg3Tx;
    early.time = 3;
    q.Push(early, 0);
    Event second = timer;
    second.ue = 9;
    q.Push(second, 0);

    CHECK(q.Size() == 4);
    CHECK(q.Pop().kind == EventKind::Msg3Tx);
    auto e = q.Pop();
    CHECK(e.kind == EventKind::TimerExpiry);
    CHECK(e.ue == 0);
    CHECK(q.Pop().ue == 9);
    CHECK(q.Pop().kind == EventKind::PrachOpportunity);
    CHECK(q.Empty());
    CHECK_THROWS_AS(q.Push(timer, 5), std::logic_error);
}

TEST_CASE("single UE run yields the closed-form minimal delay")
{
    const auto result = RunSimulation(Small(1, 1.0), 0, NoMisses());
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0].DelayMs() == 17);
    CHECK(result.records[0].start == 0);
}

TEST_CASE("a run is a deterministic function of seed and run index")
{
    const auto c = Small(100, 5.0);
    const auto a = RunSimulation(c, 3);
    const auto b = RunSimulation(c, 3);
    CHECK(SameRecords(a, b));
    CHECK_FALSE(SameRecords(a, RunSimulation(c, 4)));
    CHECK(a.metadata.runIndex == 3);
    CHECK(a.metadata.accessSeed == DeriveSeed(1, 3, StreamPurpose::Access));
    CHECK(a.metadata.detectionCurveHash == DetectionCurve::Default().Hash());
    CHECK(a.metadata.deploymentRedrawnPerRun);
    CHECK(LoadConfig(a.metadata.config) == c);
}

TEST_CASE("short horizons leave unfinished records")
{
    const auto result = RunSimulation(Small(50, 0.015), 0);
    REQUIRE(result.records.size() == 50);
    for (const auto& r : result.records)
    {
        CHECK_FALSE(r.end.has_value());
        CHECK(r.preambleAttempts == 1);
    }
}

TEST_CASE("Monte Carlo results do not depend on the number of jobs")
{
    auto c = Small(150, 3.0);
    c.run.numRuns = 6;
    const auto sequential = RunMonteCarlo(c, 1);
    const auto parallel = RunMonteCarlo(c, 4);
    REQUIRE(sequential.size() == 6);
    REQUIRE(parallel.size() == 6);
    std::set<std::uint64_t> seeds;
    for (std::size_t i = 0; i < 6; ++i)
    {
        CHECK(sequential[i].runIndex == static_cast<int>(i));
        CHECK(SameRecords(sequential[i], parallel[i]));
        seeds.insert(sequential[i].metadata.accessSeed);
    }
    CHECK(seeds.size() == 6);

    c.run.numRuns = 1;
    CHECK(RunMonteCarlo(c, 8).size() == 1);
}

TEST_CASE("state conservation and causality along the trace")
{
    for (auto mode : {SimMode::Realistic, SimMode::Ideal})
    {
        auto c = Small(40, 2.0);
        c.rach.numContentionPreambles = 4;
        c.run.mode = mode;
        RunOptions o;
        o.trace = true;
        const auto result = RunSimulation(c, 0, o);
        std::vector<RaPhase> phase(40, RaPhase::Inactive);
        std::array<std::size_t, kNumRaPhases> counts{};
        counts[0] = 40;
        Subframe last = 0;
        for (const auto& e : result.trace)
        {
            REQUIRE(e.time >= last);
            REQUIRE(e.from == phase[e.ue]);
            REQUIRE(IsAllowedTransition(e.from, e.to));
            last = e.time;
            --counts[static_cast<std::size_t>(e.from)];
            ++counts[static_cast<std::size_t>(e.to)];
            phase[e.ue] = e.to;
            std::size_t total = 0;
            for (auto n : counts)
            {
                total += n;
            }
            REQUIRE(total == 40);
        }
        CHECK(counts[static_cast<std::size_t>(RaPhase::Connected)] == 40);
    }
}

TEST_CASE("delays respect the first opportunity and never fail when unbounded")
{
    const auto result = RunSimulation(Small(200, 10.0), 1);
    for (const auto& r : result.records)
    {
        CHECK_FALSE(r.failed);
        if (r.end)
        {
            CHECK(*r.DelayMs() >= 4 + 3 + 6 + 4);
        }
    }
}

TEST_CASE("activation window spreads start times")
{
    auto c = Small(100, 3.0);
    c.run.activationWindowMs = 500;
    const auto result = RunSimulation(c, 0);
    Subframe lo = 1000;
    Subframe hi = 0;
    for (const auto& r : result.records)
    {
        lo = std::min(lo, r.start);
        hi = std::max(hi, r.start);
        if (r.end)
        {
            CHECK(*r.end > r.start);
        }
    }
    CHECK(lo >= 0);
    CHECK(hi <= 500);
    CHECK(hi - lo > 300);
}

TEST_CASE("ideal mode keeps N = 100 under one second")
{
    auto c = Small(100, 60.0);
    c.run.mode = SimMode::Ideal;
    for (const auto& run : RunMonteCarlo(c, 2))
    {
        for (const auto& r : run.records)
        {
            REQUIRE(r.end.has_value());
            CHECK(*r.DelayMs() < 1000);
        }
    }
}

TEST_CASE("site-wide PRACH scope pools all sectors")
{
    auto c = Small(60, 5.0);
    c.rach.prachScope = PrachScope::Site;
    CHECK(NumCells(c) == 1);
    c.rach.prachScope = PrachScope::PerSector;
    CHECK(NumCells(c) == 3);
    RngStream p(1);
    RngStream s(2);
    const auto d = GenerateDeployment(c.scenario, p, s);
    const auto radios = BuildRadios(c, d);
    for (std::size_t i = 0; i < radios.size(); ++i)
    {
        CHECK(radios[i].cell == d.servingSector[i]);
        CHECK(radios[i].pathlossEstimateDb > 0.0);
    }
}
