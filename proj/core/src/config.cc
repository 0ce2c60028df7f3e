// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/config.h"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace rachsim
{

namespace
{

enum class Origin
{
    Reference, // value of the reference parameter set
    Model,     // modelling choice of this simulator
    Run        // run control
};

struct KeyEntry
{
    std::string section;
    std::string key;
    Origin origin;
    std::function<void(SimulationConfig&, const std::vector<std::string>&)> parse;
    std::function<std::string(const SimulationConfig&)> format;
};

[[noreturn]] void
Invalid(const std::string& key, const std::string& message)
{
    throw ConfigError(ConfigError::Kind::Validation, key, key + ": " + message);
}

[[noreturn]] void
Malformed(const std::string& key, const std::string& message)
{
    throw ConfigError(ConfigError::Kind::Parse, key, key + ": " + message);
}

const std::string&
Single(const std::string& key, const std::vector<std::string>& inputs)
{
    if (inputs.size() != 1 || inputs.front().empty())
    {
        Malformed(key, "expected a single value");
    }
    return inputs.front();
}

double
ParseDouble(const std::string& key, const std::string& text)
{
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
    {
        Malformed(key, "'" + text + "' is not a number");
    }
    if (!std::isfinite(value))
    {
        Invalid(key, "value must be finite");
    }
    return value;
}

std::int64_t
ParseInteger(const std::string& key, const std::string& text)
{
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
    {
        Malformed(key, "'" + text + "' is not an integer");
    }
    return value;
}

int
ParseInt(const std::string& key, const std::string& text)
{
    auto value = ParseInteger(key, text);
    if (value < std::numeric_limits<int>::min() || value > std::numeric_limits<int>::max())
    {
        Invalid(key, "integer out of range");
    }
    return static_cast<int>(value);
}

bool
IsUnbounded(const std::string& text)
{
    return text == "unbounded" || text == "inf" || text == "infinity";
}

std::string
FormatDouble(double value)
{
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::string
Quote(const std::string& text)
{
    return "\"" + text + "\"";
}

template <typename T>
KeyEntry
Number(std::string section, std::string key, Origin origin, T SimulationConfig::*group, double (T::*field))
{
    return {section,
            key,
            origin,
            [group, field, key](SimulationConfig& c, const std::vector<std::string>& in) {
                (c.*group).*field = ParseDouble(key, Single(key, in));
            },
            [group, field](const SimulationConfig& c) { return FormatDouble((c.*group).*field); }};
}

template <typename T>
KeyEntry
Integer(std::string section, std::string key, Origin origin, T SimulationConfig::*group, int(T::*field))
{
    return {section,
            key,
            origin,
            [group, field, key](SimulationConfig& c, const std::vector<std::string>& in) {
                (c.*group).*field = ParseInt(key, Single(key, in));
            },
            [group, field](const SimulationConfig& c) { return std::to_string((c.*group).*field); }};
}

KeyEntry
PropagationNumber(std::string key, Origin origin, double(PropagationParams::*field))
{
    return {"propagation",
            key,
            origin,
            [field, key](SimulationConfig& c, const std::vector<std::string>& in) {
                c.scenario.propagation.*field = ParseDouble(key, Single(key, in));
            },
            [field](const SimulationConfig& c) { return FormatDouble(c.scenario.propagation.*field); }};
}

KeyEntry
WallLoss(std::string key, WallType type)
{
    auto index = static_cast<std::size_t>(type);
    return {"propagation",
            key,
            Origin::Model,
            [index, key](SimulationConfig& c, const std::vector<std::string>& in) {
                c.scenario.propagation.externalWallLossDb[index] = ParseDouble(key, Single(key, in));
            },
            [index](const SimulationConfig& c) {
                return FormatDouble(c.scenario.propagation.externalWallLossDb[index]);
            }};
}

KeyEntry
OptionalCount(std::string key, std::optional<int>(RachConfig::*field))
{
    return {"rach",
            key,
            key == "preamble_trans_max" ? Origin::Reference : Origin::Model,
            [field, key](SimulationConfig& c, const std::vector<std::string>& in) {
                const auto& text = Single(key, in);
                if (IsUnbounded(text))
                {
                    c.rach.*field = std::nullopt;
                }
                else
                {
                    c.rach.*field = ParseInt(key, text);
                }
            },
            [field](const SimulationConfig& c) {
                auto value = c.rach.*field;
                return value ? std::to_string(*value) : Quote("unbounded");
            }};
}

template <typename E>
struct EnumNames
{
    std::vector<std::pair<E, std::string>> names;

    E Parse(const std::string& key, const std::string& text) const
    {
        for (const auto& [value, name] : names)
        {
            if (name == text)
            {
                return value;
            }
        }
        std::string allowed;
        for (const auto& entry : names)
        {
            allowed += (allowed.empty() ? "" : ", ") + entry.second;
        }
        Invalid(key, "'" + text + "' is not one of {" + allowed + "}");
    }

    const std::string& Name(E value) const
    {
        for (const auto& entry : names)
        {
            if (entry.first == value)
            {
                return entry.second;
            }
        }
        throw std::logic_error("unnamed enumerator");
    }
};

const EnumNames<SimMode> kModeNames{{{SimMode::Ideal, "ideal"}, {SimMode::Realistic, "realistic"}}};
const EnumNames<WallType> kWallNames{{{WallType::ConcreteWithWindows, "concrete_with_windows"},
                                      {WallType::ConcreteWithoutWindows, "concrete_without_windows"},
                                      {WallType::StoneBlocks, "stone_blocks"},
                                      {WallType::Wood, "wood"}}};
const EnumNames<PrachScope> kScopeNames{{{PrachScope::PerSector, "sector"}, {PrachScope::Site, "site"}}};

const std::vector<KeyEntry>&
Registry()
{
    using O = Origin;
    using SC = ScenarioConfig;
    using RC = RachConfig;
    using RU = RunConfig;
    constexpr auto S = &SimulationConfig::scenario;
    constexpr auto R = &SimulationConfig::rach;
    constexpr auto U = &SimulationConfig::run;

    static const std::vector<KeyEntry> registry = {
        Number("scenario", "dl_carrier_freq_mhz", O::Reference, S, &SC::dlCarrierFreqMhz),
        Number("scenario", "ul_carrier_freq_mhz", O::Reference, S, &SC::ulCarrierFreqMhz),
        Number("scenario", "rb_bandwidth_khz", O::Reference, S, &SC::rbBandwidthKhz),
        Integer("scenario", "available_bandwidth_rb", O::Reference, S, &SC::availableBandwidthRb),
        Integer("scenario", "sectors_per_site", O::Reference, S, &SC::sectorsPerSite),
        Number("scenario", "sector_beamwidth_deg", O::Reference, S, &SC::sectorBeamwidthDeg),
        Number("scenario", "enb_tx_power_dbm", O::Reference, S, &SC::enbTxPowerDbm),
        Number("scenario", "mtd_max_tx_power_dbm", O::Reference, S, &SC::mtdMaxTxPowerDbm),
        Number("scenario", "enb_noise_figure_db", O::Reference, S, &SC::enbNoiseFigureDb),
        Number("scenario", "mtd_noise_figure_db", O::Reference, S, &SC::mtdNoiseFigureDb),
        Number("scenario", "shadowing_sigma_db", O::Reference, S, &SC::shadowingSigmaDb),
        Integer("scenario", "num_buildings", O::Reference, S, &SC::numBuildings),
        Integer("scenario", "apartments_per_floor", O::Reference, S, &SC::apartmentsPerFloor),
        Integer("scenario", "floors_per_building", O::Reference, S, &SC::floorsPerBuilding),
        Number("scenario", "mtd_speed_kmh", O::Reference, S, &SC::mtdSpeedKmh),
        Integer("scenario", "num_mtds", O::Reference, S, &SC::numMtds),
        {"scenario",
         "sim_duration_s",
         O::Reference,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             const auto& text = Single("sim_duration_s", in);
             if (text == "auto")
             {
                 c.scenario.simDurationS = std::nullopt;
             }
             else
             {
                 c.scenario.simDurationS = ParseDouble("sim_duration_s", text);
             }
         },
         [](const SimulationConfig& c) {
             return c.scenario.simDurationS ? FormatDouble(*c.scenario.simDurationS) : Quote("auto");
         }},

        Integer("geometry", "grid_columns", O::Model, S, &SC::gridColumns),
        Integer("geometry", "grid_rows", O::Model, S, &SC::gridRows),
        Number("geometry", "building_width_m", O::Model, S, &SC::buildingWidthM),
        Number("geometry", "building_depth_m", O::Model, S, &SC::buildingDepthM),
        Number("geometry", "street_width_m", O::Model, S, &SC::streetWidthM),
        Number("geometry", "floor_height_m", O::Model, S, &SC::floorHeightM),
        Number("geometry", "area_width_m", O::Model, S, &SC::areaWidthM),
        Number("geometry", "area_height_m", O::Model, S, &SC::areaHeightM),
        {"geometry",
         "wall_type",
         O::Model,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             c.scenario.wallType = kWallNames.Parse("wall_type", Single("wall_type", in));
         },
         [](const SimulationConfig& c) { return Quote(kWallNames.Name(c.scenario.wallType)); }},
        Number("geometry", "site_height_m", O::Model, S, &SC::siteHeightM),
        Number("geometry", "mtd_height_above_floor_m", O::Model, S, &SC::mtdHeightAboveFloorM),
        {"geometry",
         "sector_azimuths_deg",
         O::Model,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             if (in.empty())
             {
                 Malformed("sector_azimuths_deg", "expected a list of angles");
             }
             c.scenario.sectorAzimuthsDeg.clear();
             for (const auto& text : in)
             {
                 c.scenario.sectorAzimuthsDeg.push_back(ParseDouble("sector_azimuths_deg", text));
             }
         },
         [](const SimulationConfig& c) {
             std::string out = "[";
             for (std::size_t i = 0; i < c.scenario.sectorAzimuthsDeg.size(); ++i)
             {
                 out += (i ? ", " : "") + FormatDouble(c.scenario.sectorAzimuthsDeg[i]);
             }
             return out + "]";
         }},

        WallLoss("wall_loss_concrete_with_windows_db", WallType::ConcreteWithWindows),
        WallLoss("wall_loss_concrete_without_windows_db", WallType::ConcreteWithoutWindows),
        WallLoss("wall_loss_stone_blocks_db", WallType::StoneBlocks),
        WallLoss("wall_loss_wood_db", WallType::Wood),
        PropagationNumber("internal_wall_loss_db", O::Model, &PropagationParams::internalWallLossDb),
        {"propagation",
         "max_internal_walls",
         O::Model,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             c.scenario.propagation.maxInternalWalls =
                 ParseInt("max_internal_walls", Single("max_internal_walls", in));
         },
         [](const SimulationConfig& c) { return std::to_string(c.scenario.propagation.maxInternalWalls); }},
        PropagationNumber("hata_cm_db", O::Model, &PropagationParams::hataCmDb),
        PropagationNumber("sector_max_gain_dbi", O::Model, &PropagationParams::sectorMaxGainDbi),
        PropagationNumber("front_to_back_db", O::Model, &PropagationParams::frontToBackDb),

        Integer("rach", "prach_config_index", O::Reference, R, &RC::prachConfigIndex),
        Integer("rach", "backoff_indicator_ms", O::Reference, R, &RC::backoffIndicatorMs),
        Number("rach",
               "preamble_initial_received_target_power_dbm",
               O::Reference,
               R,
               &RC::preambleInitialReceivedTargetPowerDbm),
        Number("rach", "power_ramping_step_db", O::Reference, R, &RC::powerRampingStepDb),
        Integer("rach", "num_contention_preambles", O::Reference, R, &RC::numContentionPreambles),
        OptionalCount("preamble_trans_max", &RC::preambleTransMax),
        Integer("rach", "contention_resolution_timer_ms", O::Reference, R, &RC::contentionResolutionTimerMs),
        Number("rach", "delta_preamble_db", O::Reference, R, &RC::deltaPreambleDb),
        Integer("rach", "rar_window_ms", O::Model, R, &RC::rarWindowMs),
        Integer("rach", "rar_processing_delay_ms", O::Model, R, &RC::rarProcessingDelayMs),
        Integer("rach", "msg3_harq_max", O::Model, R, &RC::msg3HarqMax),
        OptionalCount("max_grants_per_rar", &RC::maxGrantsPerRar),
        Integer("rach", "msg3_grant_offset_ms", O::Model, R, &RC::msg3GrantOffsetMs),
        Integer("rach", "msg3_rbs_per_grant", O::Model, R, &RC::msg3RbsPerGrant),
        Integer("rach", "harq_rtt_ms", O::Model, R, &RC::harqRttMs),
        Integer("rach", "msg4_delay_ms", O::Model, R, &RC::msg4DelayMs),
        Integer("rach", "ideal_access_latency_ms", O::Model, R, &RC::idealAccessLatencyMs),
        {"rach",
         "prach_scope",
         O::Model,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             c.rach.prachScope = kScopeNames.Parse("prach_scope", Single("prach_scope", in));
         },
         [](const SimulationConfig& c) { return Quote(kScopeNames.Name(c.rach.prachScope)); }},

        {"run",
         "seed",
         O::Run,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             const auto& text = Single("seed", in);
             std::uint64_t value = 0;
             auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
             if (ec != std::errc() || ptr != text.data() + text.size())
             {
                 Malformed("seed", "'" + text + "' is not an unsigned 64-bit integer");
             }
             c.run.seed = value;
         },
         [](const SimulationConfig& c) { return std::to_string(c.run.seed); }},
        Integer("run", "num_runs", O::Reference, U, &RU::numRuns),
        {"run",
         "mode",
         O::Run,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             c.run.mode = kModeNames.Parse("mode", Single("mode", in));
         },
         [](const SimulationConfig& c) { return Quote(kModeNames.Name(c.run.mode)); }},
        {"run",
         "detection_curve",
         O::Model,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             const auto& text = Single("detection_curve", in);
             if (text == "default")
             {
                 c.run.detectionCurve.kind = DetectionCurveKind::Default;
                 c.run.detectionCurve.path.clear();
             }
             else if (text == "step")
             {
                 c.run.detectionCurve.kind = DetectionCurveKind::Step;
                 c.run.detectionCurve.path.clear();
             }
             else
             {
                 c.run.detectionCurve.kind = DetectionCurveKind::File;
                 c.run.detectionCurve.path = text;
             }
         },
         [](const SimulationConfig& c) {
             switch (c.run.detectionCurve.kind)
             {
             case DetectionCurveKind::Default:
                 return Quote("default");
             case DetectionCurveKind::Step:
                 return Quote("step");
             case DetectionCurveKind::File:
                 break;
             }
             return Quote(c.run.detectionCurve.path);
         }},
        {"run",
         "detection_step_threshold_db",
         O::Model,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             c.run.detectionCurve.stepThresholdDb =
                 ParseDouble("detection_step_threshold_db", Single("detection_step_threshold_db", in));
         },
         [](const SimulationConfig& c) { return FormatDouble(c.run.detectionCurve.stepThresholdDb); }},
        {"run",
         "output_dir",
         O::Run,
         [](SimulationConfig& c, const std::vector<std::string>& in) {
             c.run.outputDir = Single("output_dir", in);
         },
         [](const SimulationConfig& c) { return Quote(c.run.outputDir); }},
        Integer("run", "activation_window_ms", O::Model, U, &RU::activationWindowMs),
        Number("run", "timeseries_bin_s", O::Model, U, &RU::timeseriesBinS),
    };
    return registry;
}

const KeyEntry*
FindKey(const std::string& key)
{
    for (const auto& entry : Registry())
    {
        if (entry.key == key)
        {
            return &entry;
        }
    }
    return nullptr;
}

bool
IsSectionMarker(const CLI::ConfigItem& item)
{
    return item.name == "++" || item.name == "--";
}

// ConfigTOML accepts bare words as boolean flags; a parameter file has no flags,
// so every meaningful line must carry an assignment.
void
CheckLineSyntax(std::string_view document)
{
    std::istringstream in{std::string(document)};
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line))
    {
        ++lineNo;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#' || line[first] == ';')
        {
            continue;
        }
        auto last = line.find_last_not_of(" \t\r");
        if (line[first] == '[')
        {
            if (line[last] != ']')
            {
                throw ConfigError(ConfigError::Kind::Parse,
                                  "",
                                  "line " + std::to_string(lineNo) + ": unterminated section header");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError(ConfigError::Kind::Parse,
                              "",
                              "line " + std::to_string(lineNo) + ": expected 'key = value'");
        }
        if (line.find_first_not_of(" \t\r", eq + 1) == std::string::npos)
        {
            auto key = line.substr(first, line.find_last_not_of(" \t", eq - 1) - first + 1);
            throw ConfigError(ConfigError::Kind::Parse, key, key + ": missing value");
        }
    }
}

void
ApplyItem(ParsedConfig& parsed, const std::string& section, const std::string& key, const std::vector<std::string>& inputs)
{
    if (key == "schema_version")
    {
        if (!section.empty())
        {
            Invalid(key, "must appear before any section");
        }
        auto version = ParseInt(key, Single(key, inputs));
        if (version != kConfigSchemaVersion)
        {
            Invalid(key, "unsupported version " + std::to_string(version) + " (expected " +
                             std::to_string(kConfigSchemaVersion) + ")");
        }
        return;
    }
    const KeyEntry* entry = FindKey(key);
    if (entry == nullptr)
    {
        throw ConfigError(ConfigError::Kind::Validation, key, key + ": unknown key");
    }
    if (!section.empty() && section != entry->section)
    {
        Invalid(key, "belongs to section [" + entry->section + "], found in [" + section + "]");
    }
    entry->parse(parsed.config, inputs);
    parsed.explicitKeys.push_back(key);
}

} // namespace

ConfigError::ConfigError(Kind kind, std::string key, const std::string& message)
    : std::runtime_error(message),
      m_kind(kind),
      m_key(std::move(key))
{
}

bool
ParsedConfig::IsExplicit(std::string_view key) const
{
    return std::find(explicitKeys.begin(), explicitKeys.end(), key) != explicitKeys.end();
}

double
ScenarioConfig::EffectiveDurationS() const
{
    return simDurationS.value_or(DefaultDurationFor(numMtds));
}

Subframe
ScenarioConfig::HorizonSubframes() const
{
    return static_cast<Subframe>(std::llround(EffectiveDurationS() * 1000.0));
}

int
RachConfig::Msg3GrantsPerSubframe(int availableBandwidthRb) const
{
    return std::max(1, (availableBandwidthRb - 6) / msg3RbsPerGrant);
}

double
DefaultDurationFor(int numMtds)
{
    std::size_t best = 0;
    int bestDistance = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < kReferenceSweep.size(); ++i)
    {
        int distance = std::abs(kReferenceSweep[i] - numMtds);
        // '<=' walks ties towards the larger N since the list is ascending.
        if (distance <= bestDistance)
        {
            bestDistance = distance;
            best = i;
        }
    }
    return kReferenceDurationsS[best];
}

ParsedConfig
ParseConfigDocument(std::string_view document)
{
    CheckLineSyntax(document);
    std::istringstream in{std::string(document)};
    std::vector<CLI::ConfigItem> items;
    try
    {
        items = CLI::ConfigTOML().from_config(in);
    }
    catch (const CLI::Error& e)
    {
        throw ConfigError(ConfigError::Kind::Parse, "", e.what());
    }

    ParsedConfig parsed;
    for (const auto& item : items)
    {
        if (IsSectionMarker(item))
        {
            continue;
        }
        if (item.parents.size() > 1)
        {
            Malformed(item.fullname(), "nested sections are not supported");
        }
        if (parsed.IsExplicit(item.name))
        {
            Malformed(item.name, "duplicate key");
        }
        ApplyItem(parsed, item.parents.empty() ? "" : item.parents.front(), item.name, item.inputs);
    }
    Validate(parsed.config);
    return parsed;
}

SimulationConfig
LoadConfig(std::string_view document)
{
    return ParseConfigDocument(document).config;
}

SimulationConfig
LoadConfigFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError(ConfigError::Kind::Parse, "", "cannot open config file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return LoadConfig(text.str());
}

void
ApplyOverrides(ParsedConfig& parsed, const std::vector<std::string>& assignments)
{
    for (const auto& assignment : assignments)
    {
        auto eq = assignment.find('=');
        if (eq == std::string::npos)
        {
            throw ConfigError(ConfigError::Kind::Parse, "", "override '" + assignment + "' is not key=value");
        }
        std::istringstream in(assignment.substr(0, eq) + " = " + assignment.substr(eq + 1));
        std::vector<CLI::ConfigItem> items;
        try
        {
            items = CLI::ConfigTOML().from_config(in);
        }
        catch (const CLI::Error& e)
        {
            throw ConfigError(ConfigError::Kind::Parse, assignment.substr(0, eq), e.what());
        }
        for (const auto& item : items)
        {
            if (IsSectionMarker(item))
            {
                continue;
            }
            auto key = item.name;
            std::erase(parsed.explicitKeys, key);
            ApplyItem(parsed, "", key, item.inputs);
        }
    }
    Validate(parsed.config);
}

void
Validate(const SimulationConfig& config)
{
    const auto& s = config.scenario;
    const auto& r = config.rach;
    const auto& u = config.run;

    auto positive = [](const std::string& key, double value) {
        if (!(value > 0.0))
        {
            Invalid(key, "must be > 0");
        }
    };
    auto atLeast = [](const std::string& key, double value, double bound) {
        if (value < bound)
        {
            Invalid(key, "must be >= " + FormatDouble(bound));
        }
    };

    positive("dl_carrier_freq_mhz", s.dlCarrierFreqMhz);
    positive("ul_carrier_freq_mhz", s.ulCarrierFreqMhz);
    positive("rb_bandwidth_khz", s.rbBandwidthKhz);
    atLeast("available_bandwidth_rb", s.availableBandwidthRb, 7);
    if (s.sectorsPerSite != 3)
    {
        Invalid("sectors_per_site", "only a 3-sector site is supported");
    }
    if (s.sectorAzimuthsDeg.size() != static_cast<std::size_t>(s.sectorsPerSite))
    {
        Invalid("sector_azimuths_deg", "needs one azimuth per sector");
    }
    positive("sector_beamwidth_deg", s.sectorBeamwidthDeg);
    atLeast("shadowing_sigma_db", s.shadowingSigmaDb, 0.0);
    atLeast("num_buildings", s.numBuildings, 1);
    atLeast("apartments_per_floor", s.apartmentsPerFloor, 1);
    atLeast("floors_per_building", s.floorsPerBuilding, 1);
    if (s.mtdSpeedKmh != 0.0)
    {
        Invalid("mtd_speed_kmh", "only static MTDs (0 km/h) are supported");
    }
    atLeast("num_mtds", s.numMtds, 1);
    if (s.simDurationS)
    {
        positive("sim_duration_s", *s.simDurationS);
    }
    atLeast("grid_columns", s.gridColumns, 1);
    atLeast("grid_rows", s.gridRows, 1);
    if (s.gridColumns * s.gridRows != s.numBuildings)
    {
        Invalid("num_buildings", "must equal grid_columns x grid_rows");
    }
    positive("building_width_m", s.buildingWidthM);
    positive("building_depth_m", s.buildingDepthM);
    atLeast("street_width_m", s.streetWidthM, 0.0);
    positive("floor_height_m", s.floorHeightM);
    positive("area_width_m", s.areaWidthM);
    positive("area_height_m", s.areaHeightM);
    positive("site_height_m", s.siteHeightM);
    if (!(s.mtdHeightAboveFloorM >= 0.0 && s.mtdHeightAboveFloorM < s.floorHeightM))
    {
        Invalid("mtd_height_above_floor_m", "must lie in [0, floor_height_m)");
    }
    for (double loss : s.propagation.externalWallLossDb)
    {
        if (loss < 0.0)
        {
            Invalid("wall_loss_*_db", "wall losses must be >= 0");
        }
    }
    atLeast("internal_wall_loss_db", s.propagation.internalWallLossDb, 0.0);
    atLeast("max_internal_walls", s.propagation.maxInternalWalls, 0);
    atLeast("front_to_back_db", s.propagation.frontToBackDb, 0.0);

    atLeast("prach_config_index", r.prachConfigIndex, 0);
    if (r.prachConfigIndex > 15)
    {
        Invalid("prach_config_index", "only preamble format 0 indices 0..15 are supported");
    }
    atLeast("backoff_indicator_ms", r.backoffIndicatorMs, 0);
    if (r.numContentionPreambles < 1 || r.numContentionPreambles > 64)
    {
        Invalid("num_contention_preambles", "must lie in [1, 64]");
    }
    if (r.preambleTransMax && *r.preambleTransMax < 1)
    {
        Invalid("preamble_trans_max", "must be >= 1 or \"unbounded\"");
    }
    positive("contention_resolution_timer_ms", r.contentionResolutionTimerMs);
    if (r.deltaPreambleDb != 0.0)
    {
        Invalid("delta_preamble_db", "must be 0 for preamble format 0");
    }
    atLeast("power_ramping_step_db", r.powerRampingStepDb, 0.0);
    positive("rar_window_ms", r.rarWindowMs);
    positive("rar_processing_delay_ms", r.rarProcessingDelayMs);
    if (r.rarProcessingDelayMs > r.rarWindowMs)
    {
        Invalid("rar_processing_delay_ms", "must be <= rar_window_ms");
    }
    atLeast("msg3_harq_max", r.msg3HarqMax, 1);
    if (r.maxGrantsPerRar && *r.maxGrantsPerRar < 1)
    {
        Invalid("max_grants_per_rar", "must be >= 1 or \"unbounded\"");
    }
    atLeast("msg3_grant_offset_ms", r.msg3GrantOffsetMs, 1);
    atLeast("msg3_rbs_per_grant", r.msg3RbsPerGrant, 1);
    atLeast("harq_rtt_ms", r.harqRttMs, 1);
    atLeast("msg4_delay_ms", r.msg4DelayMs, 1);
    if (r.msg4DelayMs >= r.contentionResolutionTimerMs)
    {
        Invalid("msg4_delay_ms", "must be < contention_resolution_timer_ms");
    }
    atLeast("ideal_access_latency_ms", r.idealAccessLatencyMs, 1);

    atLeast("num_runs", u.numRuns, 1);
    atLeast("activation_window_ms", u.activationWindowMs, 0);
    positive("timeseries_bin_s", u.timeseriesBinS);
    if (u.detectionCurve.kind == DetectionCurveKind::File && u.detectionCurve.path.empty())
    {
        Invalid("detection_curve", "file path is empty");
    }
    if (u.outputDir.empty())
    {
        Invalid("output_dir", "must not be empty");
    }
}

std::string
SerializeConfig(const SimulationConfig& config)
{
    std::ostringstream out;
    out << "schema_version = " << kConfigSchemaVersion << "\n";
    std::string section;
    for (const auto& entry : Registry())
    {
        if (entry.section != section)
        {
            section = entry.section;
            out << "\n[" << section << "]\n";
        }
        out << entry.key << " = " << entry.format(config) << "\n";
    }
    return out.str();
}

std::string
PrintDefaults()
{
    const SimulationConfig defaults;
    std::ostringstream out;
    out << "# rachsim default parameters\n"
        << "# origin: reference = reference deployment parameter set, model = simulator modelling choice,\n"
        << "#         run = run control\n"
        << "schema_version = " << kConfigSchemaVersion << "\n";
    std::string section;
    for (const auto& entry : Registry())
    {
        if (entry.section != section)
        {
            section = entry.section;
            out << "\n[" << section << "]\n";
        }
        std::string line = entry.key + " = " + entry.format(defaults);
        const char* origin = entry.origin == Origin::Reference ? "reference"
                             : entry.origin == Origin::Model   ? "model"
                                                               : "run";
        out << line << std::string(line.size() < 52 ? 52 - line.size() : 1, ' ') << "# " << origin;
        if (entry.key == "sim_duration_s")
        {
            out << " (auto: 60/60/120/120/300/300/400/400 s for N = 50..600)";
        }
        out << "\n";
    }
    return out.str();
}

std::string
ToString(SimMode mode)
{
    return kModeNames.Name(mode);
}

std::string
ToString(WallType type)
{
    return kWallNames.Name(type);
}

std::string
ToString(PrachScope scope)
{
    return kScopeNames.Name(scope);
}

} // namespace rachsim
