// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_METRICS_H
#define RACHSIM_METRICS_H

#include "rachsim/config.h"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace rachsim
{

/// Outcome of one UE's access attempt within a run.
struct AccessRecord
{
    std::uint32_t ueId{0};
    Subframe start{0};
    /// Subframe of msg4 reception; unset when the UE did not connect.
    std::optional<Subframe> end;
    int preambleAttempts{0};
    int msg3Attempts{0};
    /// Gave up after preambleTransMax transmissions.
    bool failed{false};

    std::optional<Subframe> DelayMs() const
    {
        if (!end)
        {
            return std::nullopt;
        }
        return *end - start;
    }

    bool operator==(const AccessRecord&) const = default;
};

struct EcdfPoint
{
    double x{0.0};
    double f{0.0};

    bool operator==(const EcdfPoint&) const = default;
};

using Ecdf = std::vector<EcdfPoint>;

/// Step points at the distinct sorted samples; F(x) = #{d <= x} / n.
Ecdf ComputeEcdf(std::vector<double> samples);

/// Right-continuous evaluation; 0 left of the first step and for an empty ECDF.
double EvaluateEcdf(const Ecdf& ecdf, double x);

/// Pointwise mean over the union of step abscissae. Empty inputs count as F = 0.
Ecdf MeanEcdf(std::span<const Ecdf> ecdfs);

/// Sorted union of the step abscissae of all inputs.
std::vector<double> EcdfAbscissae(std::span<const Ecdf> ecdfs);

struct TimeBin
{
    double startS{0.0};
    std::uint64_t successes{0};

    bool operator==(const TimeBin&) const = default;
};

/**
 * Successes per bin of width `binS`, counted by msg4 time. The series covers
 * [0, horizonS) when a horizon is given, otherwise up to the last success.
 */
std::vector<TimeBin> SuccessTimeSeries(std::span<const AccessRecord> records,
                                       double binS,
                                       std::optional<double> horizonS = std::nullopt);

/// Access delays of the successful records, in seconds, in record order.
std::vector<double> SuccessfulDelaysS(std::span<const AccessRecord> records);

struct SummaryStats
{
    std::uint64_t n{0};
    std::uint64_t successes{0};
    std::uint64_t failures{0};
    std::optional<double> meanS;
    /// Unbiased (n - 1) sample standard deviation.
    std::optional<double> stdS;
    /// mean / std
    std::optional<double> ratio;
    std::optional<double> maxS;
    double successFraction{0.0};
    double failedFraction{0.0};
    double unfinishedFraction{0.0};

    bool operator==(const SummaryStats&) const = default;
};

/// Delay statistics over successful records; fractions over all records.
SummaryStats ComputeSummaryStats(std::span<const AccessRecord> records);

} // namespace rachsim

#endif // RACHSIM_METRICS_H
