// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/engine.h"

#include "rachsim/propagation.h"
#include "rachsim/random.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace rachsim
{

bool
EventQueue::Later::operator()(const Event& a, const Event& b) const
{
    const bool aOpportunity = a.kind == EventKind::PrachOpportunity;
    const bool bOpportunity = b.kind == EventKind::PrachOpportunity;
    if (a.time != b.time)
    {
        return a.time > b.time;
    }
    if (aOpportunity != bOpportunity)
    {
        return aOpportunity;
    }
    return a.sequence > b.sequence;
}

void
EventQueue::Push(Event event, Subframe now)
{
    if (event.time < now)
    {
        throw std::logic_error("event scheduled in the past");
    }
    event.sequence = m_nextSequence++;
    m_heap.push(event);
}

Event
EventQueue::Pop()
{
    Event event = m_heap.top();
    m_heap.pop();
    return event;
}

namespace
{

class QueueScheduler : public MacScheduler
{
  public:
    QueueScheduler(EventQueue& queue, const Subframe& now)
        : m_queue(queue),
          m_now(now)
    {
    }

    void ScheduleRarDelivery(Subframe t, std::size_t grantId) override
    {
        Event e;
        e.time = t;
        e.kind = EventKind::RarDelivery;
        e.grantId = grantId;
        m_queue.Push(e, m_now);
    }

    void ScheduleMsg3(Subframe t, std::size_t grantId) override
    {
        Event e;
        e.time = t;
        e.kind = EventKind::Msg3Tx;
        e.grantId = grantId;
        m_queue.Push(e, m_now);
    }

    void ScheduleMsg4(Subframe t, std::uint32_t ue, std::uint64_t epoch) override
    {
        Event e;
        e.time = t;
        e.kind = EventKind::Msg4Delivery;
        e.ue = ue;
        e.epoch = epoch;
        m_queue.Push(e, m_now);
    }

    void ScheduleTimer(Subframe t, std::uint32_t ue, TimerKind kind, std::uint64_t epoch) override
    {
        Event e;
        e.time = t;
        e.kind = EventKind::TimerExpiry;
        e.ue = ue;
        e.timer = kind;
        e.epoch = epoch;
        m_queue.Push(e, m_now);
    }

  private:
    EventQueue& m_queue;
    const Subframe& m_now;
};

Subframe
NextOpportunity(const PrachPattern& pattern, Subframe from)
{
    // Every pattern repeats within two frames.
    for (Subframe t = from; t < from + 20; ++t)
    {
        if (pattern.IsOpportunity(t))
        {
            return t;
        }
    }
    throw std::logic_error("PRACH pattern without opportunities");
}

} // namespace

int
NumCells(const SimulationConfig& config)
{
    return config.rach.prachScope == PrachScope::PerSector ? config.scenario.sectorsPerSite : 1;
}

std::vector<UeRadio>
BuildRadios(const SimulationConfig& config, const Deployment& deployment)
{
    const auto& scenario = config.scenario;
    PropagationModel propagation(scenario, deployment.buildings, deployment.site, deployment.shadowing);
    std::vector<UeRadio> radios;
    radios.reserve(deployment.mtds.size());
    for (const auto& mtd : deployment.mtds)
    {
        const int sector = deployment.servingSector.at(mtd.id);
        UeRadio radio;
        radio.cell = config.rach.prachScope == PrachScope::PerSector ? sector : 0;
        radio.pathlossEstimateDb = propagation.Link(mtd, sector, scenario.dlCarrierFreqMhz).TotalLossDb();
        radio.uplink = propagation.Link(mtd, sector, scenario.ulCarrierFreqMhz);
        radios.push_back(radio);
    }
    return radios;
}

RunResult
RunSimulation(const SimulationConfig& config, int runIndex, const RunOptions& options)
{
    Validate(config);
    const DetectionCurve curve =
        options.detectionCurve ? *options.detectionCurve : DetectionCurve::FromSpec(config.run.detectionCurve);

    RunResult result;
    result.runIndex = runIndex;
    auto& meta = result.metadata;
    meta.masterSeed = config.run.seed;
    meta.runIndex = runIndex;
    const auto run = static_cast<std::uint64_t>(runIndex);
    meta.placementSeed = DeriveSeed(config.run.seed, run, StreamPurpose::Placement);
    meta.shadowingSeed = DeriveSeed(config.run.seed, run, StreamPurpose::Shadowing);
    meta.accessSeed = DeriveSeed(config.run.seed, run, StreamPurpose::Access);
    meta.detectionSeed = DeriveSeed(config.run.seed, run, StreamPurpose::Detection);
    meta.mode = config.run.mode;
    meta.detectionCurve = curve.Describe();
    meta.detectionCurveHash = curve.Hash();
    meta.horizon = config.scenario.HorizonSubframes();
    meta.config = SerializeConfig(config);

    RngStream placementRng(meta.placementSeed);
    RngStream shadowingRng(meta.shadowingSeed);
    RngStream accessRng(meta.accessSeed);
    RngStream detectionRng(meta.detectionSeed);

    Deployment deployment = GenerateDeployment(config.scenario, placementRng, shadowingRng);

    EventQueue queue;
    Subframe now = 0;
    QueueScheduler scheduler(queue, now);
    RachMac mac(config, BuildRadios(config, deployment), NumCells(config), curve, accessRng, detectionRng, scheduler);
    mac.EnableTrace(options.trace);

    const auto numUes = static_cast<std::uint32_t>(deployment.mtds.size());
    for (std::uint32_t ue = 0; ue < numUes; ++ue)
    {
        Event activation;
        activation.kind = EventKind::UeActivation;
        activation.ue = ue;
        if (config.run.activationWindowMs > 0)
        {
            activation.time = accessRng.UniformInt(0, config.run.activationWindowMs);
        }
        queue.Push(activation, now);
    }
    const PrachPattern pattern = PrachPatternFor(config.rach.prachConfigIndex);
    Event opportunity;
    opportunity.kind = EventKind::PrachOpportunity;
    opportunity.time = NextOpportunity(pattern, 0);
    queue.Push(opportunity, now);

    const auto done = [&mac, numUes] {
        const auto counts = mac.PhaseCounts();
        return counts[static_cast<std::size_t>(RaPhase::Connected)] +
                   counts[static_cast<std::size_t>(RaPhase::Failed)] ==
               numUes;
    };

    while (!queue.Empty() && queue.Top().time < meta.horizon)
    {
        const Event event = queue.Pop();
        now = event.time;
        switch (event.kind)
        {
        case EventKind::UeActivation:
            mac.StartRa(event.ue, now);
            break;
        case EventKind::PrachOpportunity:
            mac.OnOpportunity(now);
            if (done())
            {
                break;
            }
            opportunity.time = NextOpportunity(pattern, now + 1);
            queue.Push(opportunity, now);
            break;
        case EventKind::RarDelivery:
            mac.OnRarDelivery(event.grantId, now);
            break;
        case EventKind::Msg3Tx:
            mac.OnMsg3(event.grantId, now);
            break;
        case EventKind::Msg4Delivery:
            mac.OnMsg4(event.ue, event.epoch, now);
            break;
        case EventKind::TimerExpiry:
            mac.OnTimer(event.ue, event.timer, event.epoch, now);
            break;
        }
    }

    result.records = mac.Records();
    result.trace = mac.Trace();
    if (options.keepDeployment)
    {
        result.deployment = std::move(deployment);
    }
    return result;
}

std::vector<RunResult>
RunMonteCarlo(const SimulationConfig& config, int jobs, const RunOptions& options)
{
    Validate(config);
    RunOptions shared = options;
    if (!shared.detectionCurve)
    {
        shared.detectionCurve = DetectionCurve::FromSpec(config.run.detectionCurve);
    }

    const int numRuns = config.run.numRuns;
    std::vector<RunResult> results(static_cast<std::size_t>(numRuns));
    if (jobs <= 0)
    {
        jobs = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    }
    jobs = std::min(jobs, numRuns);

    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failureMutex;
    auto worker = [&] {
        for (int run = next++; run < numRuns; run = next++)
        {
            try
            {
                results[static_cast<std::size_t>(run)] = RunSimulation(config, run, shared);
            }
            catch (...)
            {
                std::lock_guard lock(failureMutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = numRuns;
            }
        }
    };

    if (jobs == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::jthread> threads;
        for (int i = 0; i < jobs; ++i)
        {
            threads.emplace_back(worker);
        }
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }
    return results;
}

} // namespace rachsim
