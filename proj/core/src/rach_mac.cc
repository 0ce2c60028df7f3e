// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/rach_mac.h"

#include <algorithm>

namespace rachsim
{

std::string
ToString(RaPhase phase)
{
    switch (phase)
    {
    case RaPhase::Inactive:
        return "inactive";
    case RaPhase::AwaitingOpportunity:
        return "awaiting_opportunity";
    case RaPhase::PreambleSent:
        return "preamble_sent";
    case RaPhase::Msg3Pending:
        return "msg3_pending";
    case RaPhase::AwaitingContentionResolution:
        return "awaiting_contention_resolution";
    case RaPhase::Connected:
        return "connected";
    case RaPhase::Failed:
        return "failed";
    }
    return "unknown";
}

bool
IsAllowedTransition(RaPhase from, RaPhase to)
{
    using P = RaPhase;
    switch (from)
    {
    case P::Inactive:
        return to == P::AwaitingOpportunity;
    case P::AwaitingOpportunity:
        return to == P::PreambleSent || to == P::Failed;
    case P::PreambleSent:
        // Connected directly only in ideal mode.
        return to == P::Msg3Pending || to == P::AwaitingOpportunity || to == P::Connected;
    case P::Msg3Pending:
        return to == P::AwaitingContentionResolution;
    case P::AwaitingContentionResolution:
        return to == P::Msg3Pending || to == P::Connected || to == P::AwaitingOpportunity;
    case P::Connected:
    case P::Failed:
        return false;
    }
    return false;
}

RachMac::RachMac(const SimulationConfig& config,
                 std::vector<UeRadio> radios,
                 int numCells,
                 const DetectionCurve& curve,
                 RngStream& accessRng,
                 RngStream& detectionRng,
                 MacScheduler& scheduler)
    : m_config(config),
      m_radios(std::move(radios)),
      m_numCells(numCells),
      m_curve(curve),
      m_accessRng(accessRng),
      m_detectionRng(detectionRng),
      m_scheduler(scheduler),
      m_prach(PrachPatternFor(config.rach.prachConfigIndex)),
      m_msg3Capacity(config.rach.Msg3GrantsPerSubframe(config.scenario.availableBandwidthRb)),
      m_ues(m_radios.size()),
      m_records(m_radios.size()),
      m_msg3Usage(static_cast<std::size_t>(numCells))
{
    for (std::size_t i = 0; i < m_records.size(); ++i)
    {
        m_records[i].ueId = static_cast<std::uint32_t>(i);
        if (m_radios[i].cell < 0 || m_radios[i].cell >= numCells)
        {
            throw std::invalid_argument("UE " + std::to_string(i) + " has no valid serving cell");
        }
    }
    m_phaseCounts[static_cast<std::size_t>(RaPhase::Inactive)] = m_ues.size();
}

std::array<std::size_t, kNumRaPhases>
RachMac::PhaseCounts() const
{
    return m_phaseCounts;
}

void
RachMac::Transition(std::uint32_t ue, RaPhase to, Subframe t, const char* event)
{
    auto& state = m_ues[ue];
    if (!IsAllowedTransition(state.phase, to))
    {
        throw StateMachineError("UE " + std::to_string(ue) + ": illegal transition " + ToString(state.phase) +
                                " -> " + ToString(to) + " on " + event);
    }
    if (m_traceEnabled)
    {
        m_trace.push_back({t, ue, event, state.phase, to});
    }
    --m_phaseCounts[static_cast<std::size_t>(state.phase)];
    ++m_phaseCounts[static_cast<std::size_t>(to)];
    state.phase = to;
    ++state.epoch;
}

void
RachMac::StartRa(std::uint32_t ue, Subframe t)
{
    auto& state = m_ues.at(ue);
    if (state.phase != RaPhase::Inactive)
    {
        throw StateMachineError("UE " + std::to_string(ue) + " started twice");
    }
    Transition(ue, RaPhase::AwaitingOpportunity, t, "start");
    state.earliestSubframe = t;
    state.preambleTxCounter = 0;
    if (!state.raStartTime)
    {
        state.raStartTime = t;
        m_records[ue].start = t;
    }
}

void
RachMac::Backoff(std::uint32_t ue, Subframe t, const char* event)
{
    const auto backoff = m_accessRng.UniformInt(0, m_config.rach.backoffIndicatorMs);
    Transition(ue, RaPhase::AwaitingOpportunity, t, event);
    m_ues[ue].earliestSubframe = t + backoff;
}

std::optional<PreambleTransmission>
RachMac::UeOnOpportunity(std::uint32_t ue, Subframe t)
{
    auto& state = m_ues.at(ue);
    if (state.phase != RaPhase::AwaitingOpportunity || state.earliestSubframe > t)
    {
        return std::nullopt;
    }
    const auto& rach = m_config.rach;
    if (rach.preambleTransMax && state.preambleTxCounter >= *rach.preambleTransMax)
    {
        Transition(ue, RaPhase::Failed, t, "preamble_trans_max");
        m_records[ue].failed = true;
        return std::nullopt;
    }

    ++state.preambleTxCounter;
    m_records[ue].preambleAttempts = state.preambleTxCounter;
    const auto& radio = m_radios[ue];

    PreambleTransmission tx;
    tx.ueId = ue;
    tx.preambleIndex = static_cast<int>(m_accessRng.UniformInt(0, rach.numContentionPreambles - 1));
    tx.txCounter = state.preambleTxCounter;
    tx.txPowerDbm = PreambleTxPower(rach, radio.pathlossEstimateDb, tx.txCounter, m_config.scenario.mtdMaxTxPowerDbm);
    tx.snrAtEnbDb = UplinkSnrDb(tx.txPowerDbm, radio.uplink, kPrachBandwidthHz, m_config.scenario.enbNoiseFigureDb);
    tx.distanceM = radio.uplink.distanceM;

    Transition(ue, RaPhase::PreambleSent, t, "preamble");
    state.opportunity = t;
    state.preambleIndex = tx.preambleIndex;
    state.rarDeadline = t + rach.rarWindowMs;
    if (m_config.run.mode == SimMode::Realistic)
    {
        m_scheduler.ScheduleTimer(state.rarDeadline, ue, TimerKind::RarWindow, state.epoch);
    }
    return tx;
}

void
RachMac::OnOpportunity(Subframe t)
{
    std::vector<std::vector<PreambleTransmission>> perCell(static_cast<std::size_t>(m_numCells));
    for (std::uint32_t ue = 0; ue < m_ues.size(); ++ue)
    {
        if (auto tx = UeOnOpportunity(ue, t))
        {
            perCell[static_cast<std::size_t>(m_radios[ue].cell)].push_back(*tx);
        }
    }
    for (int cell = 0; cell < m_numCells; ++cell)
    {
        const auto& txs = perCell[static_cast<std::size_t>(cell)];
        if (txs.empty())
        {
            continue;
        }
        if (m_config.run.mode == SimMode::Ideal)
        {
            IdealModeAccess(txs, t);
        }
        else
        {
            EnbOnOpportunity(cell, DetectPreambles(txs, m_curve, m_detectionRng), t);
        }
    }
}

void
RachMac::IdealModeAccess(std::span<const PreambleTransmission> txs, Subframe t)
{
    std::map<int, int> uses;
    for (const auto& tx : txs)
    {
        ++uses[tx.preambleIndex];
    }
    for (const auto& tx : txs)
    {
        if (uses[tx.preambleIndex] == 1)
        {
            m_scheduler.ScheduleMsg4(t + m_config.rach.idealAccessLatencyMs, tx.ueId, m_ues[tx.ueId].epoch);
        }
        else
        {
            Transition(tx.ueId, RaPhase::AwaitingOpportunity, t, "ideal_collision");
            m_ues[tx.ueId].earliestSubframe = t + 1;
        }
    }
}

Subframe
RachMac::AllocateMsg3Subframe(int cell, Subframe earliest)
{
    auto& usage = m_msg3Usage[static_cast<std::size_t>(cell)];
    usage.erase(usage.begin(), usage.lower_bound(earliest - 64));
    for (Subframe s = earliest;; ++s)
    {
        if (m_prach.IsOpportunity(s))
        {
            continue;
        }
        int& used = usage[s];
        if (used < m_msg3Capacity)
        {
            ++used;
            return s;
        }
    }
}

std::vector<std::size_t>
RachMac::EnbOnOpportunity(int cell, const OpportunityOutcome& outcome, Subframe t)
{
    const auto& rach = m_config.rach;
    std::vector<std::size_t> granted;
    for (const auto& [index, result] : outcome.byIndex)
    {
        if (result.kind != PreambleOutcomeKind::DetectedSingle &&
            result.kind != PreambleOutcomeKind::UndetectedCollision)
        {
            continue;
        }
        if (rach.maxGrantsPerRar && static_cast<int>(granted.size()) >= *rach.maxGrantsPerRar)
        {
            break;
        }
        RarGrant grant;
        grant.cell = cell;
        grant.preambleIndex = index;
        grant.tempRnti = m_nextRnti++;
        grant.opportunity = t;
        grant.deliverySubframe = t + rach.rarProcessingDelayMs;
        grant.ulGrantSubframe = AllocateMsg3Subframe(cell, grant.deliverySubframe + rach.msg3GrantOffsetMs);
        grant.ues = result.ues;
        m_grants.push_back(std::move(grant));
        const std::size_t id = m_grants.size() - 1;
        granted.push_back(id);
        m_scheduler.ScheduleRarDelivery(m_grants[id].deliverySubframe, id);
    }
    return granted;
}

void
RachMac::OnRarDelivery(std::size_t grantId, Subframe t)
{
    const auto& grant = m_grants.at(grantId);
    for (auto ue : grant.ues)
    {
        auto& state = m_ues[ue];
        if (state.phase != RaPhase::PreambleSent || state.opportunity != grant.opportunity ||
            state.preambleIndex != grant.preambleIndex || t > state.rarDeadline)
        {
            throw StateMachineError("RAR for UE " + std::to_string(ue) + " does not match its pending preamble");
        }
        Transition(ue, RaPhase::Msg3Pending, t, "rar");
        state.grantId = grantId;
        state.grantSubframe = grant.ulGrantSubframe;
        state.harqCount = 0;
    }
    m_scheduler.ScheduleMsg3(grant.ulGrantSubframe, grantId);
}

void
RachMac::OnMsg3(std::size_t grantId, Subframe t)
{
    auto& grant = m_grants.at(grantId);
    const auto& rach = m_config.rach;
    for (auto ue : grant.ues)
    {
        auto& state = m_ues[ue];
        if (state.phase != RaPhase::Msg3Pending || state.grantId != grantId || state.grantSubframe != t)
        {
            throw StateMachineError("msg3 of UE " + std::to_string(ue) + " outside its grant");
        }
        ++m_records[ue].msg3Attempts;
        Transition(ue, RaPhase::AwaitingContentionResolution, t, "msg3");
        state.timerDeadline = t + rach.contentionResolutionTimerMs;
        m_scheduler.ScheduleTimer(state.timerDeadline, ue, TimerKind::ContentionResolution, state.epoch);
    }

    if (grant.ues.size() == 1)
    {
        const auto ue = grant.ues.front();
        m_scheduler.ScheduleMsg4(t + rach.msg4DelayMs, ue, m_ues[ue].epoch);
        return;
    }

    // No capture: every copy is lost and the same set retransmits on the same grant.
    ++grant.harqCount;
    if (grant.harqCount >= rach.msg3HarqMax)
    {
        return; // the contention-resolution timer restarts the procedure
    }
    grant.ulGrantSubframe = AllocateMsg3Subframe(grant.cell, t + rach.harqRttMs);
    for (auto ue : grant.ues)
    {
        auto& state = m_ues[ue];
        Transition(ue, RaPhase::Msg3Pending, t, "msg3_nack");
        state.grantSubframe = grant.ulGrantSubframe;
        state.harqCount = grant.harqCount;
    }
    m_scheduler.ScheduleMsg3(grant.ulGrantSubframe, grantId);
}

void
RachMac::OnMsg4(std::uint32_t ue, std::uint64_t epoch, Subframe t)
{
    auto& state = m_ues.at(ue);
    if (state.epoch != epoch)
    {
        return;
    }
    const bool ideal = m_config.run.mode == SimMode::Ideal;
    if (state.phase != (ideal ? RaPhase::PreambleSent : RaPhase::AwaitingContentionResolution))
    {
        return;
    }
    Transition(ue, RaPhase::Connected, t, "msg4");
    m_records[ue].end = t;
}

void
RachMac::OnTimer(std::uint32_t ue, TimerKind kind, std::uint64_t epoch, Subframe t)
{
    auto& state = m_ues.at(ue);
    if (state.epoch != epoch)
    {
        return;
    }
    if (kind == TimerKind::RarWindow && state.phase == RaPhase::PreambleSent)
    {
        Backoff(ue, t, "rar_window_expiry");
    }
    else if (kind == TimerKind::ContentionResolution && state.phase == RaPhase::AwaitingContentionResolution)
    {
        Backoff(ue, t, "contention_resolution_expiry");
    }
}

} // namespace rachsim
