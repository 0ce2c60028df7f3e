// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/rach_phy.h"

#include "rachsim/propagation.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rachsim
{

DetectionCurve
DetectionCurve::FromPoints(std::vector<DetectionCurvePoint> points)
{
    if (points.empty())
    {
        throw std::invalid_argument("detection curve has no points");
    }
    for (std::size_t i = 0; i < points.size(); ++i)
    {
        const auto& p = points[i];
        if (!std::isfinite(p.snrDb) || !(p.pMiss >= 0.0 && p.pMiss <= 1.0))
        {
            throw std::invalid_argument("detection curve point " + std::to_string(i) + " out of range");
        }
        if (i > 0 && !(p.snrDb > points[i - 1].snrDb))
        {
            throw std::invalid_argument("detection curve SNR values must be strictly increasing");
        }
        if (i > 0 && p.pMiss > points[i - 1].pMiss)
        {
            throw std::invalid_argument("detection curve p_miss must be non-increasing in SNR");
        }
    }
    DetectionCurve curve;
    curve.m_points = std::move(points);
    if (curve.MissProbability(kDetectionAnchorSnrDb) > kDetectionAnchorMaxMiss)
    {
        throw std::invalid_argument("detection curve violates P_miss(-14.2 dB) <= 1e-2");
    }
    return curve;
}

DetectionCurve
DetectionCurve::FromTable(std::istream& in)
{
    std::vector<DetectionCurvePoint> points;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        auto hash = line.find('#');
        if (hash != std::string::npos)
        {
            line.erase(hash);
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::string first;
        if (!(fields >> first))
        {
            continue;
        }
        DetectionCurvePoint point{};
        try
        {
            std::size_t used = 0;
            point.snrDb = std::stod(first, &used);
            if (used != first.size())
            {
                throw std::invalid_argument(first);
            }
        }
        catch (const std::exception&)
        {
            if (points.empty())
            {
                continue; // header line
            }
            throw std::invalid_argument("detection table line " + std::to_string(lineNo) + ": bad SNR");
        }
        std::string extra;
        if (!(fields >> point.pMiss) || (fields >> extra))
        {
            throw std::invalid_argument("detection table line " + std::to_string(lineNo) +
                                        ": expected two columns (snr_db, p_miss)");
        }
        points.push_back(point);
    }
    return FromPoints(std::move(points));
}

DetectionCurve
DetectionCurve::FromFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::invalid_argument("cannot open detection curve file '" + path + "'");
    }
    return FromTable(in);
}

DetectionCurve
DetectionCurve::Step(double thresholdDb)
{
    if (thresholdDb > kDetectionAnchorSnrDb)
    {
        throw std::invalid_argument("step detection threshold above -14.2 dB violates the detection anchor");
    }
    DetectionCurve curve;
    curve.m_step = true;
    curve.m_threshold = thresholdDb;
    return curve;
}

DetectionCurve
DetectionCurve::Default()
{
    // Shape of a single-antenna time-domain detector with decimation; see docs/detection.md.
    return FromPoints({
        {-30.0, 1.0},
        {-24.0, 0.98},
        {-22.0, 0.85},
        {-20.0, 0.5},
        {-18.0, 0.17},
        {-16.0, 0.04},
        {-14.2, 0.008},
        {-12.0, 8e-4},
        {-10.0, 6e-5},
        {-8.0, 4e-6},
        {-6.0, 1e-7},
    });
}

DetectionCurve
DetectionCurve::FromSpec(const DetectionCurveSpec& spec)
{
    switch (spec.kind)
    {
    case DetectionCurveKind::Default:
        return Default();
    case DetectionCurveKind::Step:
        return Step(spec.stepThresholdDb);
    case DetectionCurveKind::File:
        break;
    }
    return FromFile(spec.path);
}

double
DetectionCurve::MissProbability(double snrDb) const
{
    if (m_step)
    {
        return snrDb >= m_threshold ? 0.0 : 1.0;
    }
    if (snrDb <= m_points.front().snrDb)
    {
        return m_points.front().pMiss;
    }
    if (snrDb >= m_points.back().snrDb)
    {
        return m_points.back().pMiss;
    }
    auto hi = std::upper_bound(m_points.begin(), m_points.end(), snrDb, [](double snr, const auto& p) {
        return snr < p.snrDb;
    });
    auto lo = hi - 1;
    if (snrDb == lo->snrDb)
    {
        return lo->pMiss;
    }
    const double w = (snrDb - lo->snrDb) / (hi->snrDb - lo->snrDb);
    if (lo->pMiss == 0.0 || hi->pMiss == 0.0)
    {
        return lo->pMiss + w * (hi->pMiss - lo->pMiss);
    }
    return std::pow(10.0, std::log10(lo->pMiss) + w * (std::log10(hi->pMiss) - std::log10(lo->pMiss)));
}

std::string
DetectionCurve::Describe() const
{
    std::ostringstream out;
    out.precision(17);
    if (m_step)
    {
        out << "step:" << m_threshold;
        return out.str();
    }
    out << "table:";
    for (std::size_t i = 0; i < m_points.size(); ++i)
    {
        out << (i ? ";" : "") << m_points[i].snrDb << "," << m_points[i].pMiss;
    }
    return out.str();
}

std::uint64_t
DetectionCurve::Hash() const
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : Describe())
    {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

double
MissedDetectionProb(const DetectionCurve& curve, double snrDb)
{
    return curve.MissProbability(snrDb);
}

double
PreambleTxPower(const RachConfig& rach, double pathlossEstimateDb, int txCounter, double pUeMaxDbm)
{
    if (txCounter < 1)
    {
        throw std::invalid_argument("PREAMBLE_TX_COUNTER starts at 1");
    }
    const double receivedTarget =
        rach.preambleInitialReceivedTargetPowerDbm + rach.deltaPreambleDb + (txCounter - 1) * rach.powerRampingStepDb;
    return std::min(pUeMaxDbm, receivedTarget + pathlossEstimateDb);
}

bool
PrachPattern::IsOpportunity(Subframe t) const
{
    if (t < 0)
    {
        return false;
    }
    const Subframe frame = t / 10;
    if (evenFramesOnly && frame % 2 != 0)
    {
        return false;
    }
    return subframes[static_cast<std::size_t>(t % 10)];
}

std::vector<int>
SupportedPrachConfigIndices()
{
    std::vector<int> indices(16);
    for (int i = 0; i < 16; ++i)
    {
        indices[i] = i;
    }
    return indices;
}

PrachPattern
PrachPatternFor(int configIndex)
{
    // FDD, preamble format 0 rows of the PRACH configuration table.
    static const std::array<std::pair<bool, std::vector<int>>, 16> table{{
        {true, {1}},
        {true, {4}},
        {true, {7}},
        {false, {1}},
        {false, {4}},
        {false, {7}},
        {false, {1, 6}},
        {false, {2, 7}},
        {false, {3, 8}},
        {false, {1, 4, 7}},
        {false, {2, 5, 8}},
        {false, {3, 6, 9}},
        {false, {0, 2, 4, 6, 8}},
        {false, {1, 3, 5, 7, 9}},
        {false, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}},
        {true, {9}},
    }};
    if (configIndex < 0 || configIndex >= static_cast<int>(table.size()))
    {
        throw std::invalid_argument("unsupported PRACH configuration index " + std::to_string(configIndex) +
                                    " (supported: 0..15, preamble format 0)");
    }
    PrachPattern pattern;
    pattern.evenFramesOnly = table[configIndex].first;
    for (int sf : table[configIndex].second)
    {
        pattern.subframes[sf] = true;
    }
    return pattern;
}

PrachSchedule
PrachOpportunities(int configIndex, Subframe horizon)
{
    PrachSchedule schedule;
    schedule.pattern = PrachPatternFor(configIndex);
    for (Subframe t = 0; t < horizon; ++t)
    {
        if (schedule.pattern.IsOpportunity(t))
        {
            schedule.opportunities.push_back(t);
        }
    }
    return schedule;
}

double
CollisionDistanceThresholdM(double bandwidthHz)
{
    return kSpeedOfLightMps / (2.0 * bandwidthHz);
}

bool
CollisionDistinguishable(double dMaxM, double dMinM, double bandwidthHz)
{
    if (dMaxM < dMinM || dMinM < 0.0)
    {
        throw DomainError("collision check needs d_max >= d_min >= 0");
    }
    // Same as (dMax - dMin) / c > 1 / (2B), without the rounding of the division.
    return dMaxM - dMinM > CollisionDistanceThresholdM(bandwidthHz);
}

PreambleOutcomeKind
OpportunityOutcome::KindOf(int preambleIndex) const
{
    auto it = byIndex.find(preambleIndex);
    return it == byIndex.end() ? PreambleOutcomeKind::Silent : it->second.kind;
}

std::size_t
OpportunityOutcome::CountOf(PreambleOutcomeKind kind) const
{
    return static_cast<std::size_t>(
        std::count_if(byIndex.begin(), byIndex.end(), [kind](const auto& e) { return e.second.kind == kind; }));
}

std::size_t
OpportunityOutcome::TotalUes() const
{
    std::size_t total = 0;
    for (const auto& [index, outcome] : byIndex)
    {
        total += outcome.ues.size();
    }
    return total;
}

OpportunityOutcome
DetectPreambles(std::span<const PreambleTransmission> txs, const DetectionCurve& curve, RngStream& rng)
{
    struct Group
    {
        std::vector<std::uint32_t> ues;
        std::vector<double> detectedDistances;
    };
    std::map<int, Group> groups;
    for (const auto& tx : txs)
    {
        const bool detected = rng.Bernoulli(1.0 - curve.MissProbability(tx.snrAtEnbDb));
        auto& group = groups[tx.preambleIndex];
        group.ues.push_back(tx.ueId);
        if (detected)
        {
            group.detectedDistances.push_back(tx.distanceM);
        }
    }

    OpportunityOutcome outcome;
    for (auto& [index, group] : groups)
    {
        PreambleOutcome result;
        const auto& detected = group.detectedDistances;
        if (detected.empty())
        {
            result.kind = PreambleOutcomeKind::Missed;
        }
        else if (group.ues.size() == 1)
        {
            result.kind = PreambleOutcomeKind::DetectedSingle;
        }
        else
        {
            auto [dMin, dMax] = std::minmax_element(detected.begin(), detected.end());
            result.kind = CollisionDistinguishable(*dMax, *dMin) ? PreambleOutcomeKind::DetectedCollision
                                                                 : PreambleOutcomeKind::UndetectedCollision;
        }
        result.ues = std::move(group.ues);
        outcome.byIndex.emplace(index, std::move(result));
    }
    return outcome;
}

std::string
ToString(PreambleOutcomeKind kind)
{
    switch (kind)
    {
    case PreambleOutcomeKind::Silent:
        return "silent";
    case PreambleOutcomeKind::DetectedSingle:
        return "detected_single";
    case PreambleOutcomeKind::DetectedCollision:
        return "detected_collision";
    case PreambleOutcomeKind::UndetectedCollision:
        return "undetected_collision";
    case PreambleOutcomeKind::Missed:
        return "missed";
    }
    return "unknown";
}

} // namespace rachsim
