// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_RACH_PHY_H
#define RACHSIM_RACH_PHY_H

#include "rachsim/config.h"
#include "rachsim/random.h"

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace rachsim
{

/// PRACH bandwidth: 6 RBs.
inline constexpr double kPrachBandwidthHz = 1.08e6;
inline constexpr double kSpeedOfLightMps = 2.998e8;
/// Detection requirement anchor: P_miss(-14.2 dB) must not exceed 1e-2.
inline constexpr double kDetectionAnchorSnrDb = -14.2;
inline constexpr double kDetectionAnchorMaxMiss = 1e-2;

struct DetectionCurvePoint
{
    double snrDb;
    double pMiss;
};

/**
 * Missed-detection probability as a function of preamble SNR at the eNB.
 *
 * Between two points p_miss is interpolated linearly in log10(p_miss); if
 * either bracket is exactly zero the interpolation is linear. Outside the
 * table the nearest end point is used.
 */
class DetectionCurve
{
  public:
    /// Validates: non-empty, strictly increasing SNR, p in [0,1], non-increasing p, and the anchor.
    static DetectionCurve FromPoints(std::vector<DetectionCurvePoint> points);
    /// Two-column "snr_db p_miss" text; '#' comments and an optional header line are skipped.
    static DetectionCurve FromTable(std::istream& in);
    static DetectionCurve FromFile(const std::string& path);
    /// Detect iff SNR >= threshold.
    static DetectionCurve Step(double thresholdDb);
    /// Representative curve for a time-domain detector with decimation.
    static DetectionCurve Default();
    static DetectionCurve FromSpec(const DetectionCurveSpec& spec);

    double MissProbability(double snrDb) const;

    const std::vector<DetectionCurvePoint>& Points() const
    {
        return m_points;
    }

    bool IsStep() const
    {
        return m_step;
    }

    double StepThresholdDb() const
    {
        return m_threshold;
    }

    /// Stable textual form, recorded in run metadata.
    std::string Describe() const;
    /// FNV-1a of Describe().
    std::uint64_t Hash() const;

  private:
    DetectionCurve() = default;

    std::vector<DetectionCurvePoint> m_points;
    bool m_step{false};
    double m_threshold{0.0};
};

double MissedDetectionProb(const DetectionCurve& curve, double snrDb);

/// P_prach = min(P_max, target + delta + (counter - 1) * step + P_lc).
double PreambleTxPower(const RachConfig& rach, double pathlossEstimateDb, int txCounter, double pUeMaxDbm);

/// Format-0 PRACH time pattern of one configuration index.
struct PrachPattern
{
    bool evenFramesOnly{false};
    std::array<bool, 10> subframes{};

    bool IsOpportunity(Subframe t) const;
};

/// Supported configuration indices (format 0: 0..15).
std::vector<int> SupportedPrachConfigIndices();
/// Throws std::invalid_argument listing supported indices.
PrachPattern PrachPatternFor(int configIndex);

struct PrachSchedule
{
    std::vector<Subframe> opportunities;
    int prachRbOffset{0};
    int prachRbs{6};
    PrachPattern pattern;

    bool IsPrachSubframe(Subframe t) const
    {
        return pattern.IsOpportunity(t);
    }
};

/// Opportunities in [0, horizon).
PrachSchedule PrachOpportunities(int configIndex, Subframe horizon);

/// Distance spread that equals one PRACH chip: c / (2 B).
double CollisionDistanceThresholdM(double bandwidthHz = kPrachBandwidthHz);

/// (dMax - dMin) / c > 1 / (2 B). Throws DomainError if dMax < dMin.
bool CollisionDistinguishable(double dMaxM, double dMinM, double bandwidthHz = kPrachBandwidthHz);

struct PreambleTransmission
{
    std::uint32_t ueId{0};
    int preambleIndex{0};
    int txCounter{1};
    double txPowerDbm{0.0};
    double snrAtEnbDb{0.0};
    double distanceM{0.0};
};

enum class PreambleOutcomeKind
{
    Silent,
    DetectedSingle,
    DetectedCollision,
    UndetectedCollision,
    Missed
};

struct PreambleOutcome
{
    PreambleOutcomeKind kind{PreambleOutcomeKind::Silent};
    /// Every UE that transmitted the index, in transmission order.
    std::vector<std::uint32_t> ues;
};

/// Outcome of one PRACH opportunity; indices nobody used are silent.
struct OpportunityOutcome
{
    std::map<int, PreambleOutcome> byIndex;

    PreambleOutcomeKind KindOf(int preambleIndex) const;
    std::size_t CountOf(PreambleOutcomeKind kind) const;
    std::size_t TotalUes() const;
};

/**
 * Detection at one opportunity. One independent draw per transmitter with
 * success probability 1 - P_miss(snr), in input order. Per index: nobody
 * detected -> missed; exactly one detected -> single if it was the only
 * sender, otherwise an undetected collision; two or more detected -> the
 * collision is detected when the detected senders' distance spread exceeds
 * one chip. Different indices never interact.
 */
OpportunityOutcome DetectPreambles(std::span<const PreambleTransmission> txs,
                                   const DetectionCurve& curve,
                                   RngStream& rng);

std::string ToString(PreambleOutcomeKind kind);

} // namespace rachsim

#endif // RACHSIM_RACH_PHY_H
