// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_RACH_MAC_H
#define RACHSIM_RACH_MAC_H

#include "rachsim/config.h"
#include "rachsim/metrics.h"
#include "rachsim/propagation.h"
#include "rachsim/rach_phy.h"
#include "rachsim/random.h"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rachsim
{

enum class RaPhase
{
    Inactive,
    AwaitingOpportunity,
    PreambleSent,
    Msg3Pending,
    AwaitingContentionResolution,
    Connected,
    Failed
};

inline constexpr std::size_t kNumRaPhases = 7;

std::string ToString(RaPhase phase);

/// Edges of the UE state graph.
bool IsAllowedTransition(RaPhase from, RaPhase to);

enum class TimerKind
{
    RarWindow,
    ContentionResolution
};

struct UeRaState
{
    RaPhase phase{RaPhase::Inactive};
    /// AwaitingOpportunity: first subframe at which a preamble may be sent.
    Subframe earliestSubframe{0};
    /// PreambleSent
    Subframe opportunity{0};
    int preambleIndex{-1};
    Subframe rarDeadline{0};
    /// Msg3Pending
    std::size_t grantId{0};
    Subframe grantSubframe{0};
    int harqCount{0};
    /// AwaitingContentionResolution
    Subframe timerDeadline{0};

    int preambleTxCounter{0};
    std::optional<Subframe> raStartTime;
    /// Bumped on every transition; timers carrying an older value are stale.
    std::uint64_t epoch{0};
};

struct RarGrant
{
    int cell{0};
    int preambleIndex{0};
    std::uint32_t tempRnti{0};
    Subframe opportunity{0};
    Subframe deliverySubframe{0};
    Subframe ulGrantSubframe{0};
    /// Every UE that sent the preamble; more than one for an undetected collision.
    std::vector<std::uint32_t> ues;
    int harqCount{0};
};

/// Radio quantities of one UE towards its serving cell.
struct UeRadio
{
    int cell{0};
    /// Downlink pathloss estimate used for open-loop power control.
    double pathlossEstimateDb{0.0};
    /// Uplink link towards the serving sector.
    LinkState uplink;
};

/// Event sink implemented by the engine.
class MacScheduler
{
  public:
    virtual ~MacScheduler() = default;
    virtual void ScheduleRarDelivery(Subframe t, std::size_t grantId) = 0;
    virtual void ScheduleMsg3(Subframe t, std::size_t grantId) = 0;
    virtual void ScheduleMsg4(Subframe t, std::uint32_t ue, std::uint64_t epoch) = 0;
    virtual void ScheduleTimer(Subframe t, std::uint32_t ue, TimerKind kind, std::uint64_t epoch) = 0;
};

struct TraceEvent
{
    Subframe time{0};
    std::uint32_t ue{0};
    std::string event;
    RaPhase from{RaPhase::Inactive};
    RaPhase to{RaPhase::Inactive};
};

class StateMachineError : public std::logic_error
{
  public:
    using std::logic_error::logic_error;
};

/**
 * UE and eNB random access state machines of all cells of a run.
 *
 * Realistic mode runs the full 4-message handshake: preamble detection,
 * RAR with a shared grant for undetected collisions, msg3 with HARQ and no
 * capture, msg4 or contention-resolution timeout. Ideal mode resolves each
 * opportunity at once: unique preambles connect after a fixed latency and
 * colliding UEs retry at the next opportunity.
 */
class RachMac
{
  public:
    RachMac(const SimulationConfig& config,
            std::vector<UeRadio> radios,
            int numCells,
            const DetectionCurve& curve,
            RngStream& accessRng,
            RngStream& detectionRng,
            MacScheduler& scheduler);

    void EnableTrace(bool enable)
    {
        m_traceEnabled = enable;
    }

    /// Throws StateMachineError when the UE was already started.
    void StartRa(std::uint32_t ue, Subframe t);

    /// Handles one PRACH opportunity for every cell.
    void OnOpportunity(Subframe t);

    /**
     * UE side of an opportunity. Returns the transmission, or nothing when the
     * UE is not eligible or has just exhausted preambleTransMax (it is then failed).
     */
    std::optional<PreambleTransmission> UeOnOpportunity(std::uint32_t ue, Subframe t);

    /// Grants for detected singles and undetected collisions, in preamble order. Returns grant ids.
    std::vector<std::size_t> EnbOnOpportunity(int cell, const OpportunityOutcome& outcome, Subframe t);

    void IdealModeAccess(std::span<const PreambleTransmission> txs, Subframe t);

    void OnRarDelivery(std::size_t grantId, Subframe t);
    void OnMsg3(std::size_t grantId, Subframe t);
    void OnMsg4(std::uint32_t ue, std::uint64_t epoch, Subframe t);
    void OnTimer(std::uint32_t ue, TimerKind kind, std::uint64_t epoch, Subframe t);

    const UeRaState& State(std::uint32_t ue) const
    {
        return m_ues.at(ue);
    }

    const RarGrant& Grant(std::size_t id) const
    {
        return m_grants.at(id);
    }

    std::size_t NumUes() const
    {
        return m_ues.size();
    }

    std::array<std::size_t, kNumRaPhases> PhaseCounts() const;

    const std::vector<AccessRecord>& Records() const
    {
        return m_records;
    }

    const std::vector<TraceEvent>& Trace() const
    {
        return m_trace;
    }

  private:
    void Transition(std::uint32_t ue, RaPhase to, Subframe t, const char* event);
    void Backoff(std::uint32_t ue, Subframe t, const char* event);
    /// First non-PRACH subframe >= earliest with a free msg3 slot in the cell.
    Subframe AllocateMsg3Subframe(int cell, Subframe earliest);

    const SimulationConfig& m_config;
    std::vector<UeRadio> m_radios;
    int m_numCells;
    const DetectionCurve& m_curve;
    RngStream& m_accessRng;
    RngStream& m_detectionRng;
    MacScheduler& m_scheduler;
    PrachPattern m_prach;
    int m_msg3Capacity;

    std::vector<UeRaState> m_ues;
    std::vector<AccessRecord> m_records;
    std::vector<RarGrant> m_grants;
    std::vector<std::map<Subframe, int>> m_msg3Usage;
    std::uint32_t m_nextRnti{1};
    std::array<std::size_t, kNumRaPhases> m_phaseCounts{};

    bool m_traceEnabled{false};
    std::vector<TraceEvent> m_trace;
};

} // namespace rachsim

#endif // RACHSIM_RACH_MAC_H
