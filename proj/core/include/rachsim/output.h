// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_OUTPUT_H
#define RACHSIM_OUTPUT_H

#include "rachsim/config.h"
#include "rachsim/engine.h"

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace rachsim
{

/// Results of every run for one value of N.
struct SweepPoint
{
    int numMtds{0};
    SimulationConfig config;
    std::vector<RunResult> results;
};

/// Shortest decimal form that reads back to the same double.
std::string FormatDouble(double value);

/// run_id,ue_id,start_ms,end_ms,delay_ms,preamble_attempts,msg3_attempts
void WriteAccessRecordsCsv(std::ostream& out, std::span<const RunResult> results);

/// delay_s,F_mean,F_run_0,...: one row per distinct delay over all runs.
void WriteEcdfCsv(std::ostream& out, std::span<const RunResult> results);

/// bin_start_s,successes_mean,successes_run_0,...
void WriteTimeseriesCsv(std::ostream& out, std::span<const RunResult> results, double binS, double horizonS);

/// time_ms,run_id,ue_id,event,from,to
void WriteTraceCsv(std::ostream& out, std::span<const RunResult> results);

/// Per-N pooled and per-run statistics with the effective configuration and seeds.
/// output_dir is written as "." so the file does not depend on where it is stored.
void WriteSummaryJson(std::ostream& out, std::span<const SweepPoint> points);

struct ManifestEntry
{
    std::string path;
    std::uintmax_t bytes{0};
};

struct Manifest
{
    std::string version;
    std::string commandLine;
    std::string createdUtc;
    std::vector<ManifestEntry> files;
};

void WriteManifestJson(std::ostream& out, const Manifest& manifest);

} // namespace rachsim

#endif // RACHSIM_OUTPUT_H
