// SPDX-License-Identifier: GPL-2.0-only

#include "cli.h"

#include "rachsim/config.h"
#include "rachsim/engine.h"
#include "rachsim/output.h"
#include "rachsim/scenario.h"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rachsim::cli
{

namespace
{

namespace fs = std::filesystem;

struct Invocation
{
    std::string configPath;
    std::optional<int> numMtds;
    std::vector<int> sweep;
    std::optional<int> runs;
    std::optional<std::uint64_t> seed;
    std::string mode;
    std::string outDir;
    int jobs{1};
    bool printDefaults{false};
    bool dumpDeployment{false};
    bool trace{false};
    std::vector<std::string> overrides;
};

class FileSet
{
  public:
    explicit FileSet(fs::path dir)
        : m_dir(std::move(dir))
    {
    }

    std::ofstream Open(const std::string& name)
    {
        std::ofstream out(m_dir / name, std::ios::binary);
        if (!out)
        {
            throw std::runtime_error("cannot write " + (m_dir / name).string());
        }
        m_names.push_back(name);
        return out;
    }

    std::vector<ManifestEntry> Entries() const
    {
        std::vector<ManifestEntry> entries;
        for (const auto& name : m_names)
        {
            entries.push_back({name, fs::file_size(m_dir / name)});
        }
        return entries;
    }

  private:
    fs::path m_dir;
    std::vector<std::string> m_names;
};

std::string
UtcNow()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

/// Flags become key=value overrides so they pass the same validation as a file.
ParsedConfig
ResolveConfig(const Invocation& inv)
{
    ParsedConfig parsed;
    if (!inv.configPath.empty())
    {
        std::ifstream in(inv.configPath);
        if (!in)
        {
            throw ConfigError(ConfigError::Kind::Parse, "", "cannot open config file '" + inv.configPath + "'");
        }
        std::ostringstream text;
        text << in.rdbuf();
        parsed = ParseConfigDocument(text.str());
    }
    std::vector<std::string> assignments = inv.overrides;
    if (inv.numMtds)
    {
        assignments.push_back("num_mtds=" + std::to_string(*inv.numMtds));
    }
    if (inv.runs)
    {
        assignments.push_back("num_runs=" + std::to_string(*inv.runs));
    }
    if (inv.seed)
    {
        assignments.push_back("seed=" + std::to_string(*inv.seed));
    }
    if (!inv.mode.empty())
    {
        assignments.push_back("mode=" + inv.mode);
    }
    if (!inv.outDir.empty())
    {
        assignments.push_back("output_dir=\"" + inv.outDir + "\"");
    }
    ApplyOverrides(parsed, assignments);
    return parsed;
}

std::vector<int>
ResolveSweep(const Invocation& inv, const ParsedConfig& parsed)
{
    if (!inv.sweep.empty())
    {
        return inv.sweep;
    }
    if (parsed.IsExplicit("num_mtds"))
    {
        return {parsed.config.scenario.numMtds};
    }
    return {kReferenceSweep.begin(), kReferenceSweep.end()};
}

int
Execute(const Invocation& inv, const std::string& commandLine, std::ostream& out, std::ostream& err)
{
    ParsedConfig parsed = ResolveConfig(inv);
    const auto sweep = ResolveSweep(inv, parsed);

    std::vector<SimulationConfig> configs;
    for (int n : sweep)
    {
        SimulationConfig config = parsed.config;
        config.scenario.numMtds = n;
        if (n < 1)
        {
            throw ConfigError(ConfigError::Kind::Validation, "num_mtds", "num_mtds: must be >= 1");
        }
        Validate(config);
        configs.push_back(config);
    }

    const fs::path dir = parsed.config.run.outputDir;
    fs::create_directories(dir);
    FileSet files(dir);

    RunOptions options;
    options.trace = inv.trace;
    options.keepDeployment = inv.dumpDeployment;

    std::vector<SweepPoint> points;
    for (const auto& config : configs)
    {
        const int n = config.scenario.numMtds;
        const auto tag = "N" + std::to_string(n);
        SweepPoint point{n, config, RunMonteCarlo(config, inv.jobs, options)};

        {
            auto f = files.Open("access_records_" + tag + ".csv");
            WriteAccessRecordsCsv(f, point.results);
        }
        {
            auto f = files.Open("ecdf_" + tag + ".csv");
            WriteEcdfCsv(f, point.results);
        }
        {
            auto f = files.Open("timeseries_" + tag + ".csv");
            WriteTimeseriesCsv(f, point.results, config.run.timeseriesBinS, config.scenario.EffectiveDurationS());
        }
        if (inv.trace)
        {
            auto f = files.Open("trace_" + tag + ".csv");
            WriteTraceCsv(f, point.results);
        }
        if (inv.dumpDeployment)
        {
            for (const auto& run : point.results)
            {
                auto f = files.Open("deployment_" + tag + "_run" + std::to_string(run.runIndex) + ".csv");
                WriteDeploymentCsv(f, *run.deployment);
            }
        }

        std::vector<AccessRecord> pooled;
        for (auto& run : point.results)
        {
            pooled.insert(pooled.end(), run.records.begin(), run.records.end());
            run.trace.clear();
            run.deployment.reset();
        }
        const auto stats = ComputeSummaryStats(pooled);
        err << "N=" << n << ": " << point.results.size() << " runs over " << config.scenario.EffectiveDurationS()
            << " s, success " << stats.successFraction;
        if (stats.meanS)
        {
            err << ", mean delay " << *stats.meanS << " s";
        }
        err << '\n';
        points.push_back(std::move(point));
    }

    {
        auto f = files.Open("summary.json");
        WriteSummaryJson(f, points);
    }
    Manifest manifest{RACHSIM_VERSION, commandLine, UtcNow(), files.Entries()};
    {
        std::ofstream f(dir / "manifest.json", std::ios::binary);
        WriteManifestJson(f, manifest);
    }
    out << "results written to " << dir.string() << '\n';
    return kExitOk;
}

} // namespace

int
Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    Invocation inv;
    CLI::App app{"LTE random access simulator for massive machine-type access"};
    app.set_version_flag("--version", RACHSIM_VERSION);
    app.add_option("--config", inv.configPath, "Configuration file (key = value, optional [sections])");
    app.add_option("--num-mtds", inv.numMtds, "Number of MTDs; runs a single N instead of the default sweep");
    app.add_option("--sweep", inv.sweep, "Comma-separated list of N")->delimiter(',');
    app.add_option("--runs", inv.runs, "Monte Carlo runs per N");
    app.add_option("--seed", inv.seed, "Master seed");
    app.add_option("--mode", inv.mode, "Access model")->check(CLI::IsMember({"ideal", "realistic"}));
    app.add_option("--out-dir", inv.outDir, "Output directory");
    app.add_option("--jobs", inv.jobs, "Concurrent runs (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--set", inv.overrides, "Override any configuration key: key=value (repeatable)");
    app.add_flag("--print-defaults", inv.printDefaults, "Print the default configuration and exit");
    app.add_flag("--dump-deployment", inv.dumpDeployment, "Write the MTD placement of every run");
    app.add_flag("--trace", inv.trace, "Write the per-UE state transition trace");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp&)
    {
        out << app.help();
        return kExitOk;
    }
    catch (const CLI::CallForVersion&)
    {
        out << RACHSIM_VERSION << '\n';
        return kExitOk;
    }
    catch (const CLI::ParseError& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }

    if (inv.printDefaults)
    {
        out << PrintDefaults();
        return kExitOk;
    }

    std::string commandLine;
    for (int i = 0; i < argc; ++i)
    {
        commandLine += (i ? " " : "") + std::string(argv[i]);
    }
    try
    {
        return Execute(inv, commandLine, out, err);
    }
    catch (const ConfigError& e)
    {
        err << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return kExitRuntimeError;
    }
}

} // namespace rachsim::cli
