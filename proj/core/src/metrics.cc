// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/metrics.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rachsim
{

Ecdf
ComputeEcdf(std::vector<double> samples)
{
    for (double s : samples)
    {
        if (!std::isfinite(s) || s < 0.0)
        {
            throw std::invalid_argument("ECDF samples must be finite and non-negative");
        }
    }
    std::sort(samples.begin(), samples.end());
    Ecdf ecdf;
    const auto n = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
    {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i])
        {
            continue;
        }
        ecdf.push_back({samples[i], static_cast<double>(i + 1) / n});
    }
    return ecdf;
}

double
EvaluateEcdf(const Ecdf& ecdf, double x)
{
    auto it = std::upper_bound(ecdf.begin(), ecdf.end(), x, [](double v, const EcdfPoint& p) { return v < p.x; });
    return it == ecdf.begin() ? 0.0 : std::prev(it)->f;
}

std::vector<double>
EcdfAbscissae(std::span<const Ecdf> ecdfs)
{
    std::vector<double> xs;
    for (const auto& ecdf : ecdfs)
    {
        for (const auto& p : ecdf)
        {
            xs.push_back(p.x);
        }
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

Ecdf
MeanEcdf(std::span<const Ecdf> ecdfs)
{
    if (ecdfs.empty())
    {
        throw std::invalid_argument("mean ECDF needs at least one input");
    }
    Ecdf mean;
    for (double x : EcdfAbscissae(ecdfs))
    {
        double sum = 0.0;
        for (const auto& ecdf : ecdfs)
        {
            sum += EvaluateEcdf(ecdf, x);
        }
        mean.push_back({x, sum / static_cast<double>(ecdfs.size())});
    }
    return mean;
}

std::vector<TimeBin>
SuccessTimeSeries(std::span<const AccessRecord> records, double binS, std::optional<double> horizonS)
{
    if (!(binS > 0.0))
    {
        throw std::invalid_argument("time-series bin width must be positive");
    }
    std::vector<std::size_t> binOf;
    std::size_t numBins = 0;
    if (horizonS)
    {
        numBins = static_cast<std::size_t>(std::ceil(*horizonS / binS));
    }
    for (const auto& r : records)
    {
        if (r.end)
        {
            auto bin = static_cast<std::size_t>(std::floor(static_cast<double>(*r.end) / 1000.0 / binS));
            binOf.push_back(bin);
            numBins = std::max(numBins, bin + 1);
        }
    }
    std::vector<TimeBin> series(numBins);
    for (std::size_t i = 0; i < numBins; ++i)
    {
        series[i].startS = static_cast<double>(i) * binS;
    }
    for (auto bin : binOf)
    {
        ++series[bin].successes;
    }
    return series;
}

std::vector<double>
SuccessfulDelaysS(std::span<const AccessRecord> records)
{
    std::vector<double> delays;
    for (const auto& r : records)
    {
        if (auto d = r.DelayMs())
        {
            delays.push_back(static_cast<double>(*d) / 1000.0);
        }
    }
    return delays;
}

SummaryStats
ComputeSummaryStats(std::span<const AccessRecord> records)
{
    SummaryStats stats;
    stats.n = records.size();
    for (const auto& r : records)
    {
        stats.failures += r.failed ? 1 : 0;
    }
    // Sorted so that the floating-point sums do not depend on record order.
    auto delays = SuccessfulDelaysS(records);
    std::sort(delays.begin(), delays.end());
    stats.successes = delays.size();

    if (stats.n > 0)
    {
        const auto n = static_cast<double>(stats.n);
        stats.successFraction = static_cast<double>(stats.successes) / n;
        stats.failedFraction = static_cast<double>(stats.failures) / n;
        stats.unfinishedFraction = static_cast<double>(stats.n - stats.successes - stats.failures) / n;
    }
    if (delays.empty())
    {
        return stats;
    }
    double sum = 0.0;
    for (double d : delays)
    {
        sum += d;
    }
    const double mean = sum / static_cast<double>(delays.size());
    stats.meanS = mean;
    stats.maxS = delays.back();
    if (delays.size() >= 2)
    {
        double ss = 0.0;
        for (double d : delays)
        {
            ss += (d - mean) * (d - mean);
        }
        stats.stdS = std::sqrt(ss / static_cast<double>(delays.size() - 1));
        if (*stats.stdS > 0.0)
        {
            stats.ratio = mean / *stats.stdS;
        }
    }
    return stats;
}

} // namespace rachsim
