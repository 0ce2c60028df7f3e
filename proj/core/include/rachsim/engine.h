// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_ENGINE_H
#define RACHSIM_ENGINE_H

#include "rachsim/config.h"
#include "rachsim/metrics.h"
#include "rachsim/rach_mac.h"
#include "rachsim/rach_phy.h"
#include "rachsim/scenario.h"

#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

namespace rachsim
{

enum class EventKind
{
    UeActivation,
    RarDelivery,
    Msg3Tx,
    Msg4Delivery,
    TimerExpiry,
    PrachOpportunity
};

struct Event
{
    Subframe time{0};
    std::uint64_t sequence{0};
    EventKind kind{EventKind::UeActivation};
    std::uint32_t ue{0};
    std::size_t grantId{0};
    TimerKind timer{TimerKind::RarWindow};
    std::uint64_t epoch{0};
};

/**
 * Pending events in (time, sequence) order, except that a PRACH opportunity
 * runs after every other event of its subframe, so a UE that becomes
 * eligible at subframe t can transmit in an opportunity at t.
 */
class EventQueue
{
  public:
    /// Assigns the next sequence number. Throws std::logic_error for events before `now`.
    void Push(Event event, Subframe now);
    Event Pop();

    const Event& Top() const
    {
        return m_heap.top();
    }

    bool Empty() const
    {
        return m_heap.empty();
    }

    std::size_t Size() const
    {
        return m_heap.size();
    }

  private:
    struct Later
    {
        bool operator()(const Event& a, const Event& b) const;
    };

    std::priority_queue<Event, std::vector<Event>, Later> m_heap;
    std::uint64_t m_nextSequence{0};
};

struct RunMetadata
{
    std::uint64_t masterSeed{0};
    int runIndex{0};
    std::uint64_t placementSeed{0};
    std::uint64_t shadowingSeed{0};
    std::uint64_t accessSeed{0};
    std::uint64_t detectionSeed{0};
    SimMode mode{SimMode::Realistic};
    std::string detectionCurve;
    std::uint64_t detectionCurveHash{0};
    /// Placement and shadowing are drawn anew for every run.
    bool deploymentRedrawnPerRun{true};
    Subframe horizon{0};
    /// SerializeConfig of the effective configuration.
    std::string config;

    bool operator==(const RunMetadata&) const = default;
};

struct RunOptions
{
    bool trace{false};
    bool keepDeployment{false};
    /// Replaces the curve named by the configuration.
    std::optional<DetectionCurve> detectionCurve;
};

struct RunResult
{
    int runIndex{0};
    std::vector<AccessRecord> records;
    RunMetadata metadata;
    std::vector<TraceEvent> trace;
    std::optional<Deployment> deployment;
};

/// Radio state of every MTD towards its serving cell.
std::vector<UeRadio> BuildRadios(const SimulationConfig& config, const Deployment& deployment);

int NumCells(const SimulationConfig& config);

/**
 * One Monte Carlo run: deployment, activation of every UE and the event loop
 * up to the configured duration. A deterministic function of
 * (config, config.run.seed, runIndex).
 */
RunResult RunSimulation(const SimulationConfig& config, int runIndex, const RunOptions& options = {});

/**
 * config.run.numRuns independent runs on up to `jobs` threads (0 = hardware
 * concurrency). Results are ordered by run index and do not depend on `jobs`.
 */
std::vector<RunResult> RunMonteCarlo(const SimulationConfig& config, int jobs = 1, const RunOptions& options = {});

} // namespace rachsim

#endif // RACHSIM_ENGINE_H
