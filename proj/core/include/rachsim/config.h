// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_CONFIG_H
#define RACHSIM_CONFIG_H

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rachsim
{

/// Simulation time in LTE subframes (1 ms).
using Subframe = std::int64_t;

inline constexpr int kConfigSchemaVersion = 1;

/// Number of MTDs swept by default, with the matching simulated durations.
inline constexpr std::array<int, 8> kReferenceSweep{50, 100, 150, 200, 300, 400, 500, 600};
inline constexpr std::array<double, 8> kReferenceDurationsS{60, 60, 120, 120, 300, 300, 400, 400};

enum class SimMode
{
    Ideal,
    Realistic
};

enum class WallType
{
    ConcreteWithWindows,
    ConcreteWithoutWindows,
    StoneBlocks,
    Wood
};

/// Which UEs share a preamble pool and eNB RA context.
enum class PrachScope
{
    PerSector, ///< every sector is its own cell with its own PRACH
    Site       ///< all three sectors share one preamble pool
};

enum class DetectionCurveKind
{
    Default, ///< the shipped representative point table
    Step,    ///< detect iff SNR >= threshold
    File     ///< two-column (snr_db, p_miss) text table
};

struct DetectionCurveSpec
{
    DetectionCurveKind kind{DetectionCurveKind::Default};
    double stepThresholdDb{-14.2};
    std::string path;

    bool operator==(const DetectionCurveSpec&) const = default;
};

struct PropagationParams
{
    /// External wall penetration loss indexed by WallType.
    std::array<double, 4> externalWallLossDb{7.0, 15.0, 12.0, 4.0};
    double internalWallLossDb{5.0};
    int maxInternalWalls{3};
    /// COST-231 metropolitan correction C_m.
    double hataCmDb{3.0};
    double sectorMaxGainDbi{14.0};
    double frontToBackDb{20.0};

    bool operator==(const PropagationParams&) const = default;
};

struct ScenarioConfig
{
    double dlCarrierFreqMhz{945.0};
    double ulCarrierFreqMhz{900.0};
    double rbBandwidthKhz{180.0};
    int availableBandwidthRb{50};
    int sectorsPerSite{3};
    double sectorBeamwidthDeg{65.0};
    double enbTxPowerDbm{43.0};
    double mtdMaxTxPowerDbm{23.0};
    double enbNoiseFigureDb{3.0};
    double mtdNoiseFigureDb{5.0};
    double shadowingSigmaDb{8.0};
    int numBuildings{96};
    int apartmentsPerFloor{6};
    int floorsPerBuilding{3};
    double mtdSpeedKmh{0.0};
    int numMtds{100};
    /// Unset means "use DefaultDurationFor(numMtds)".
    std::optional<double> simDurationS;

    // Layout of the building grid.
    int gridColumns{12};
    int gridRows{8};
    double buildingWidthM{25.0};
    double buildingDepthM{50.0};
    double streetWidthM{10.0};
    double floorHeightM{3.0};
    double areaWidthM{500.0};
    double areaHeightM{500.0};
    WallType wallType{WallType::ConcreteWithWindows};
    double siteHeightM{30.0};
    double mtdHeightAboveFloorM{1.5};
    std::vector<double> sectorAzimuthsDeg{0.0, 120.0, 240.0};

    PropagationParams propagation;

    double EffectiveDurationS() const;
    Subframe HorizonSubframes() const;

    bool operator==(const ScenarioConfig&) const = default;
};

struct RachConfig
{
    int prachConfigIndex{1};
    int backoffIndicatorMs{0};
    double preambleInitialReceivedTargetPowerDbm{-110.0};
    double powerRampingStepDb{2.0};
    int numContentionPreambles{54};
    /// Unset means unbounded.
    std::optional<int> preambleTransMax;
    int contentionResolutionTimerMs{32};
    double deltaPreambleDb{0.0};
    int rarWindowMs{10};
    int rarProcessingDelayMs{3};
    int msg3HarqMax{5};
    /// Unset means unbounded.
    std::optional<int> maxGrantsPerRar;
    /// Subframes between RAR reception and the earliest msg3 grant.
    int msg3GrantOffsetMs{6};
    int msg3RbsPerGrant{3};
    int harqRttMs{8};
    int msg4DelayMs{4};
    /// Opportunity-to-setup latency used by the ideal baseline.
    int idealAccessLatencyMs{6};
    PrachScope prachScope{PrachScope::PerSector};

    /// msg3 grants that fit in one uplink subframe next to the PRACH band.
    int Msg3GrantsPerSubframe(int availableBandwidthRb) const;

    bool operator==(const RachConfig&) const = default;
};

struct RunConfig
{
    std::uint64_t seed{1};
    int numRuns{10};
    SimMode mode{SimMode::Realistic};
    DetectionCurveSpec detectionCurve;
    std::string outputDir{"results"};
    /// UEs activate uniformly in [0, W] ms; 0 means all at t = 0.
    int activationWindowMs{0};
    /// Success time-series bin width.
    double timeseriesBinS{1.0};

    bool operator==(const RunConfig&) const = default;
};

struct SimulationConfig
{
    ScenarioConfig scenario;
    RachConfig rach;
    RunConfig run;

    bool operator==(const SimulationConfig&) const = default;
};

/// A config document together with the keys it set explicitly.
struct ParsedConfig
{
    SimulationConfig config;
    std::vector<std::string> explicitKeys;

    bool IsExplicit(std::string_view key) const;
};

/**
 * Raised for malformed documents and out-of-range values. `Key()` names the
 * offending parameter (empty for syntax errors that are not tied to a key).
 */
class ConfigError : public std::runtime_error
{
  public:
    enum class Kind
    {
        Parse,
        Validation
    };

    ConfigError(Kind kind, std::string key, const std::string& message);

    Kind GetKind() const
    {
        return m_kind;
    }

    const std::string& Key() const
    {
        return m_key;
    }

  private:
    Kind m_kind;
    std::string m_key;
};

ParsedConfig ParseConfigDocument(std::string_view document);

/// Parse, apply defaults for omitted keys and validate.
SimulationConfig LoadConfig(std::string_view document);
SimulationConfig LoadConfigFile(const std::string& path);

/**
 * Apply `key=value` overrides on top of an existing configuration. The
 * result is validated with the same rules as a document.
 */
void ApplyOverrides(ParsedConfig& parsed, const std::vector<std::string>& assignments);

/// Throws ConfigError naming the first violated bound.
void Validate(const SimulationConfig& config);

/// Canonical document; LoadConfig(SerializeConfig(c)) == c.
std::string SerializeConfig(const SimulationConfig& config);

/// Defaults as a loadable document annotated with where each value comes from.
std::string PrintDefaults();

/// Simulated duration for the reference sweep; other N use the nearest listed N, ties upward.
double DefaultDurationFor(int numMtds);

std::string ToString(SimMode mode);
std::string ToString(WallType type);
std::string ToString(PrachScope scope);

} // namespace rachsim

#endif // RACHSIM_CONFIG_H
