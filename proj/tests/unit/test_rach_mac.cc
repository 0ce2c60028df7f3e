// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/engine.h"
#include "rachsim/rach_mac.h"

#include <doctest.h>

#include <memory>

using namespace rachsim;

namespace
{

/// Minimal event loop around one RachMac.
class Harness : public MacScheduler
{
  public:
    Harness(SimulationConfig config, std::vector<double> distances, std::uint64_t seed = 1)
        : m_config(std::move(config)),
          m_curve(DetectionCurve::FromPoints({{0.0, 0.0}})),
          m_access(seed),
          m_detection(seed + 1000)
    {
        std::vector<UeRadio> radios;
        for (double d : distances)
        {
            UeRadio r;
            r.pathlossEstimateDb = 120.0;
            r.uplink.pathlossDb = 120.0;
            r.uplink.distanceM = d;
            radios.push_back(r);
        }
        mac = std::make_unique<RachMac>(m_config, radios, 1, m_curve, m_access, m_detection, *this);
        mac->EnableTrace(true);
    }

    void ScheduleRarDelivery(Subframe t, std::size_t grantId) override
    {
        Push({t, 0, EventKind::RarDelivery, 0, grantId});
    }

    void ScheduleMsg3(Subframe t, std::size_t grantId) override
    {
        Push({t, 0, EventKind::Msg3Tx, 0, grantId});
    }

    void ScheduleMsg4(Subframe t, std::uint32_t ue, std::uint64_t epoch) override
    {
        Push({t, 0, EventKind::Msg4Delivery, ue, 0, TimerKind::RarWindow, epoch});
    }

    void ScheduleTimer(Subframe t, std::uint32_t ue, TimerKind kind, std::uint64_t epoch) override
    {
        Push({t, 0, EventKind::TimerExpiry, ue, 0, kind, epoch});
    }

    /// Processes events and index-1 opportunities in [now, end).
    void RunUntil(Subframe end)
    {
        const auto pattern = PrachPatternFor(m_config.rach.prachConfigIndex);
        for (; now < end; ++now)
        {
            while (!queue.Empty() && queue.Top().time == now)
            {
                Dispatch(queue.Pop());
            }
            if (pattern.IsOpportunity(now))
            {
                mac->OnOpportunity(now);
            }
        }
    }

    std::unique_ptr<RachMac> mac;
    EventQueue queue;
    Subframe now{0};

  private:
    void Push(Event e)
    {
        queue.Push(e, now);
    }

    void Dispatch(const Event& e)
    {
        switch (e.kind)
        {
        case EventKind::RarDelivery:
            mac->OnRarDelivery(e.grantId, e.time);
            break;
        case EventKind::Msg3Tx:
            mac->OnMsg3(e.grantId, e.time);
            break;
        case EventKind::Msg4Delivery:
            mac->OnMsg4(e.ue, e.epoch, e.time);
            break;
        case EventKind::TimerExpiry:
            mac->OnTimer(e.ue, e.timer, e.epoch, e.time);
            break;
        default:
            break;
        }
    }

    SimulationConfig m_config;
    DetectionCurve m_curve;
    RngStream m_access;
    RngStream m_detection;
};

SimulationConfig
OnePreamble()
{
    SimulationConfig c;
    c.rach.numContentionPreambles = 1;
    return c;
}

} // namespace

TEST_CASE("state graph")
{
    CHECK(IsAllowedTransition(RaPhase::Inactive, RaPhase::AwaitingOpportunity));
    CHECK(IsAllowedTransition(RaPhase::PreambleSent, RaPhase::Msg3Pending));
    CHECK(IsAllowedTransition(RaPhase::AwaitingContentionResolution, RaPhase::Msg3Pending));
    CHECK_FALSE(IsAllowedTransition(RaPhase::Inactive, RaPhase::Connected));
    CHECK_FALSE(IsAllowedTransition(RaPhase::Connected, RaPhase::AwaitingOpportunity));
    CHECK_FALSE(IsAllowedTransition(RaPhase::Failed, RaPhase::AwaitingOpportunity));
    CHECK_FALSE(IsAllowedTransition(RaPhase::Msg3Pending, RaPhase::Connected));
    CHECK(ToString(RaPhase::AwaitingContentionResolution) == "awaiting_contention_resolution");
}

TEST_CASE("start_ra")
{
    Harness h(SimulationConfig{}, {100, 100, 100});
    for (std::uint32_t ue = 0; ue < 3; ++ue)
    {
        h.mac->StartRa(ue, 0);
    }
    CHECK(h.mac->PhaseCounts()[static_cast<std::size_t>(RaPhase::AwaitingOpportunity)] == 3);
    CHECK(h.mac->State(1).preambleTxCounter == 0);
    CHECK(h.mac->State(1).raStartTime == 0);
    CHECK_THROWS_AS(h.mac->StartRa(1, 5), StateMachineError);
}

TEST_CASE("a UE started at t = 7 transmits at subframe 24")
{
    Harness h(SimulationConfig{}, {100});
    h.RunUntil(7);
    h.mac->StartRa(0, 7);
    h.RunUntil(24);
    CHECK(h.mac->State(0).phase == RaPhase::AwaitingOpportunity);
    h.RunUntil(25);
    CHECK(h.mac->State(0).phase == RaPhase::PreambleSent);
    CHECK(h.mac->State(0).opportunity == 24);
    CHECK(h.mac->State(0).rarDeadline == 34);
}

TEST_CASE("ue_on_opportunity")
{
    SimulationConfig c;
    Harness h(c, {100});
    h.mac->StartRa(0, 0);
    CHECK(h.mac->UeOnOpportunity(0, 0).has_value());
    CHECK(h.mac->State(0).preambleTxCounter == 1);

    Harness late(c, {100});
    late.mac->StartRa(0, 0);
    CHECK_FALSE(late.mac->UeOnOpportunity(0, -1).has_value());

    Harness power(c, {100});
    power.mac->StartRa(0, 0);
    const auto tx = power.mac->UeOnOpportunity(0, 4);
    REQUIRE(tx.has_value());
    CHECK(tx->txCounter == 1);
    CHECK(tx->txPowerDbm == -110.0 + 120.0);
    CHECK(tx->snrAtEnbDb == doctest::Approx(10.0 - 120.0 + 110.6657624451305));
    CHECK(tx->preambleIndex >= 0);
    CHECK(tx->preambleIndex < 54);
}

TEST_CASE("preambleTransMax exhaustion")
{
    SimulationConfig c = OnePreamble();
    c.rach.preambleTransMax = 2;
    Harness h(c, {10, 300}); // detected collision every time
    h.mac->StartRa(0, 0);
    h.mac->StartRa(1, 0);
    h.RunUntil(100);
    for (std::uint32_t ue = 0; ue < 2; ++ue)
    {
        CHECK(h.mac->State(ue).phase == RaPhase::Failed);
        CHECK(h.mac->State(ue).preambleTxCounter == 2);
        CHECK(h.mac->Records()[ue].failed);
        CHECK(h.mac->Records()[ue].preambleAttempts == 2);
    }
}

TEST_CASE("unbounded preambleTransMax never fails")
{
    Harness h(OnePreamble(), {10, 300});
    h.mac->StartRa(0, 0);
    h.mac->StartRa(1, 0);
    h.RunUntil(2000);
    CHECK(h.mac->PhaseCounts()[static_cast<std::size_t>(RaPhase::Failed)] == 0);
    CHECK(h.mac->State(0).preambleTxCounter == 100);
}

TEST_CASE("enb_on_opportunity grants")
{
    SimulationConfig c;
    Harness h(c, {100, 100, 100, 100, 100});
    OpportunityOutcome outcome;
    outcome.byIndex[5] = {PreambleOutcomeKind::DetectedSingle, {1}};
    outcome.byIndex[9] = {PreambleOutcomeKind::DetectedCollision, {2, 3}};
    outcome.byIndex[11] = {PreambleOutcomeKind::Missed, {0}};
    auto grants = h.mac->EnbOnOpportunity(0, outcome, 4);
    REQUIRE(grants.size() == 1);
    const auto& grant = h.mac->Grant(grants[0]);
    CHECK(grant.preambleIndex == 5);
    CHECK(grant.deliverySubframe == 7);
    CHECK(grant.ulGrantSubframe == 13);
    CHECK(grant.ulGrantSubframe > grant.deliverySubframe);

    OpportunityOutcome shared;
    shared.byIndex[2] = {PreambleOutcomeKind::UndetectedCollision, {3, 4}};
    grants = h.mac->EnbOnOpportunity(0, shared, 24);
    REQUIRE(grants.size() == 1);
    CHECK(h.mac->Grant(grants[0]).ues == std::vector<std::uint32_t>{3, 4});

    CHECK(h.mac->EnbOnOpportunity(0, OpportunityOutcome{}, 44).empty());
}

TEST_CASE("msg3 grants skip PRACH subframes and respect capacity")
{
    SimulationConfig c;
    Harness h(c, std::vector<double>(40, 100.0));
    OpportunityOutcome outcome;
    for (int i = 0; i < 30; ++i)
    {
        outcome.byIndex[i] = {PreambleOutcomeKind::DetectedSingle, {static_cast<std::uint32_t>(i)}};
    }
    // RAR at 17, earliest grant 23, 24 is a PRACH subframe.
    const auto grants = h.mac->EnbOnOpportunity(0, outcome, 14);
    REQUIRE(grants.size() == 30);
    CHECK(h.mac->Grant(grants[0]).ulGrantSubframe == 23);
    CHECK(h.mac->Grant(grants[13]).ulGrantSubframe == 23);
    CHECK(h.mac->Grant(grants[14]).ulGrantSubframe == 25);
    CHECK(h.mac->Grant(grants[28]).ulGrantSubframe == 26);

    c.rach.maxGrantsPerRar = 4;
    Harness capped(c, std::vector<double>(40, 100.0));
    CHECK(capped.mac->EnbOnOpportunity(0, outcome, 4).size() == 4);
}

TEST_CASE("single UE connects in the closed-form minimum")
{
    Harness h(SimulationConfig{}, {120});
    h.mac->StartRa(0, 0);
    h.RunUntil(200);
    const auto& r = h.mac->Records()[0];
    REQUIRE(r.end.has_value());
    // opportunity 4 + RAR 3 + grant offset 6 + msg4 4
    CHECK(*r.DelayMs() == 17);
    CHECK(r.preambleAttempts == 1);
    CHECK(r.msg3Attempts == 1);
    CHECK(h.mac->State(0).phase == RaPhase::Connected);

    // A stray msg4 is ignored.
    h.mac->OnMsg4(0, h.mac->State(0).epoch, 300);
    CHECK(h.mac->Records()[0].end == 17);
}

TEST_CASE("undetected collision re-collides on msg3 until HARQ is exhausted")
{
    Harness h(OnePreamble(), {100, 150});
    h.mac->StartRa(0, 0);
    h.mac->StartRa(1, 0);
    h.RunUntil(46);
    for (std::uint32_t ue = 0; ue < 2; ++ue)
    {
        CHECK(h.mac->Records()[ue].msg3Attempts == 5);
        CHECK(h.mac->State(ue).phase == RaPhase::AwaitingContentionResolution);
        CHECK(h.mac->State(ue).timerDeadline == 45 + 32);
    }
    h.RunUntil(78);
    CHECK(h.mac->State(0).phase == RaPhase::AwaitingOpportunity);
    CHECK(h.mac->State(0).earliestSubframe == 77);
    h.RunUntil(85);
    CHECK(h.mac->State(0).phase == RaPhase::PreambleSent);
    CHECK(h.mac->State(0).preambleTxCounter == 2);
    CHECK(h.mac->State(0).raStartTime == 0);

    std::vector<Subframe> msg3Times;
    for (const auto& e : h.mac->Trace())
    {
        if (e.ue == 0 && e.event == "msg3")
        {
            msg3Times.push_back(e.time);
        }
    }
    CHECK(msg3Times == std::vector<Subframe>{13, 21, 29, 37, 45});
}

TEST_CASE("missed RAR backs off")
{
    SimulationConfig c = OnePreamble();
    Harness h(c, {10, 300});
    h.mac->StartRa(0, 0);
    h.mac->StartRa(1, 0);
    h.RunUntil(15);
    CHECK(h.mac->State(0).phase == RaPhase::AwaitingOpportunity);
    CHECK(h.mac->State(0).earliestSubframe == 14);

    c.rach.backoffIndicatorMs = 20;
    Subframe lo = 1000;
    Subframe hi = -1;
    for (std::uint64_t seed = 1; seed <= 200; ++seed)
    {
        Harness b(c, {10, 300}, seed);
        b.mac->StartRa(0, 0);
        b.mac->StartRa(1, 0);
        b.RunUntil(15);
        for (std::uint32_t ue = 0; ue < 2; ++ue)
        {
            REQUIRE(b.mac->State(ue).phase == RaPhase::AwaitingOpportunity);
            const Subframe backoff = b.mac->State(ue).earliestSubframe - 14;
            lo = std::min(lo, backoff);
            hi = std::max(hi, backoff);
        }
    }
    CHECK(lo == 0);
    CHECK(hi == 20);
}

TEST_CASE("ideal mode resolves collisions at the first step")
{
    SimulationConfig c;
    c.run.mode = SimMode::Ideal;
    Harness h(c, {100, 100});
    h.mac->StartRa(0, 0);
    h.mac->StartRa(1, 0);
    h.RunUntil(4);
    auto a = *h.mac->UeOnOpportunity(0, 4);
    auto b = *h.mac->UeOnOpportunity(1, 4);
    a.preambleIndex = 1;
    b.preambleIndex = 2;
    std::vector<PreambleTransmission> distinct{a, b};
    h.mac->IdealModeAccess(distinct, 4);
    h.now = 5;
    h.RunUntil(20);
    CHECK(*h.mac->Records()[0].DelayMs() == 10);
    CHECK(*h.mac->Records()[1].DelayMs() == 10);

    Harness same(c, {100, 100});
    same.mac->StartRa(0, 0);
    same.mac->StartRa(1, 0);
    a = *same.mac->UeOnOpportunity(0, 4);
    b = *same.mac->UeOnOpportunity(1, 4);
    a.preambleIndex = b.preambleIndex = 7;
    std::vector<PreambleTransmission> colliding{a, b};
    same.mac->IdealModeAccess(colliding, 4);
    for (std::uint32_t ue = 0; ue < 2; ++ue)
    {
        CHECK(same.mac->State(ue).phase == RaPhase::AwaitingOpportunity);
        CHECK(same.mac->State(ue).earliestSubframe == 5);
    }
}

TEST_CASE("ideal mode: exhaustive small-N check")
{
    // N <= 4 UEs on K = 54: every run eventually connects everybody, with monotone progress.
    for (std::uint32_t n = 1; n <= 4; ++n)
    {
        SimulationConfig c;
        c.run.mode = SimMode::Ideal;
        Harness h(c, std::vector<double>(n, 100.0));
        for (std::uint32_t ue = 0; ue < n; ++ue)
        {
            h.mac->StartRa(ue, 0);
        }
        std::size_t connected = 0;
        for (Subframe t = 20; t <= 2000; t += 20)
        {
            h.RunUntil(t);
            const auto now = h.mac->PhaseCounts()[static_cast<std::size_t>(RaPhase::Connected)];
            CHECK(now >= connected);
            connected = now;
        }
        CHECK(connected == n);
    }
}
