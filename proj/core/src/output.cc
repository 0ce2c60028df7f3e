// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/output.h"

#include "json.hpp"

#include <charconv>
#include <cstdio>

namespace rachsim
{

namespace
{

using Json = nlohmann::ordered_json;

Json
OptionalNumber(const std::optional<double>& value)
{
    return value ? Json(*value) : Json(nullptr);
}

Json
StatsJson(const SummaryStats& s)
{
    Json j;
    j["n"] = s.n;
    j["successes"] = s.successes;
    j["failures"] = s.failures;
    j["mean_s"] = OptionalNumber(s.meanS);
    j["std_s"] = OptionalNumber(s.stdS);
    j["mean_over_std"] = OptionalNumber(s.ratio);
    j["max_s"] = OptionalNumber(s.maxS);
    j["success_fraction"] = s.successFraction;
    j["failed_fraction"] = s.failedFraction;
    j["unfinished_fraction"] = s.unfinishedFraction;
    return j;
}

std::string
Hex(std::uint64_t value)
{
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(value));
    return buffer;
}

} // namespace

std::string
FormatDouble(double value)
{
    char buffer[32];
    auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, end);
}

void
WriteAccessRecordsCsv(std::ostream& out, std::span<const RunResult> results)
{
    out << "run_id,ue_id,start_ms,end_ms,delay_ms,preamble_attempts,msg3_attempts\n";
    for (const auto& run : results)
    {
        for (const auto& r : run.records)
        {
            out << run.runIndex << ',' << r.ueId << ',' << r.start << ',';
            if (r.end)
            {
                out << *r.end << ',' << *r.DelayMs();
            }
            else
            {
                out << ',';
            }
            out << ',' << r.preambleAttempts << ',' << r.msg3Attempts << '\n';
        }
    }
}

void
WriteEcdfCsv(std::ostream& out, std::span<const RunResult> results)
{
    std::vector<Ecdf> ecdfs;
    for (const auto& run : results)
    {
        ecdfs.push_back(ComputeEcdf(SuccessfulDelaysS(run.records)));
    }
    out << "delay_s,F_mean";
    for (const auto& run : results)
    {
        out << ",F_run_" << run.runIndex;
    }
    out << '\n';
    if (ecdfs.empty())
    {
        return;
    }
    for (const auto& point : MeanEcdf(ecdfs))
    {
        out << FormatDouble(point.x) << ',' << FormatDouble(point.f);
        for (const auto& ecdf : ecdfs)
        {
            out << ',' << FormatDouble(EvaluateEcdf(ecdf, point.x));
        }
        out << '\n';
    }
}

void
WriteTimeseriesCsv(std::ostream& out, std::span<const RunResult> results, double binS, double horizonS)
{
    std::vector<std::vector<TimeBin>> series;
    std::size_t numBins = 0;
    for (const auto& run : results)
    {
        series.push_back(SuccessTimeSeries(run.records, binS, horizonS));
        numBins = std::max(numBins, series.back().size());
    }
    out << "bin_start_s,successes_mean";
    for (const auto& run : results)
    {
        out << ",successes_run_" << run.runIndex;
    }
    out << '\n';
    for (std::size_t bin = 0; bin < numBins; ++bin)
    {
        std::uint64_t total = 0;
        for (const auto& s : series)
        {
            total += bin < s.size() ? s[bin].successes : 0;
        }
        out << FormatDouble(static_cast<double>(bin) * binS) << ','
            << FormatDouble(static_cast<double>(total) / static_cast<double>(series.size()));
        for (const auto& s : series)
        {
            out << ',' << (bin < s.size() ? s[bin].successes : 0);
        }
        out << '\n';
    }
}

void
WriteTraceCsv(std::ostream& out, std::span<const RunResult> results)
{
    out << "time_ms,run_id,ue_id,event,from,to\n";
    for (const auto& run : results)
    {
        for (const auto& e : run.trace)
        {
            out << e.time << ',' << run.runIndex << ',' << e.ue << ',' << e.event << ',' << ToString(e.from) << ','
                << ToString(e.to) << '\n';
        }
    }
}

void
WriteSummaryJson(std::ostream& out, std::span<const SweepPoint> points)
{
    Json doc;
    doc["schema_version"] = kConfigSchemaVersion;
    Json list = Json::array();
    for (const auto& point : points)
    {
        Json p;
        p["num_mtds"] = point.numMtds;
        p["mode"] = ToString(point.config.run.mode);
        p["num_runs"] = point.results.size();
        p["sim_duration_s"] = point.config.scenario.EffectiveDurationS();
        p["master_seed"] = point.config.run.seed;

        std::vector<AccessRecord> pooled;
        Json runs = Json::array();
        for (const auto& run : point.results)
        {
            pooled.insert(pooled.end(), run.records.begin(), run.records.end());
            const auto& m = run.metadata;
            Json r;
            r["run_index"] = run.runIndex;
            r["seeds"] = {{"placement", m.placementSeed},
                          {"shadowing", m.shadowingSeed},
                          {"access", m.accessSeed},
                          {"detection", m.detectionSeed}};
            r["stats"] = StatsJson(ComputeSummaryStats(run.records));
            runs.push_back(std::move(r));
        }
        p["pooled"] = StatsJson(ComputeSummaryStats(pooled));
        p["runs"] = std::move(runs);
        if (!point.results.empty())
        {
            const auto& m = point.results.front().metadata;
            p["detection_curve"] = m.detectionCurve;
            p["detection_curve_hash"] = Hex(m.detectionCurveHash);
            p["deployment_redrawn_per_run"] = m.deploymentRedrawnPerRun;
        }
        SimulationConfig effective = point.config;
        effective.run.outputDir = ".";
        p["config"] = SerializeConfig(effective);
        list.push_back(std::move(p));
    }
    doc["points"] = std::move(list);
    out << doc.dump(2) << '\n';
}

void
WriteManifestJson(std::ostream& out, const Manifest& manifest)
{
    Json doc;
    doc["tool"] = "rachsim";
    doc["version"] = manifest.version;
    doc["created_utc"] = manifest.createdUtc;
    doc["command_line"] = manifest.commandLine;
    Json files = Json::array();
    for (const auto& f : manifest.files)
    {
        files.push_back({{"path", f.path}, {"bytes", f.bytes}});
    }
    doc["files"] = std::move(files);
    out << doc.dump(2) << '\n';
}

} // namespace rachsim
