// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/metrics.h"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace rachsim;

namespace
{

AccessRecord
Done(std::uint32_t id, Subframe start, Subframe end)
{
    AccessRecord r;
    r.ueId = id;
    r.start = start;
    r.end = end;
    r.preambleAttempts = 1;
    return r;
}

AccessRecord
Pending(std::uint32_t id, bool failed = false)
{
    AccessRecord r;
    r.ueId = id;
    r.preambleAttempts = 3;
    r.failed = failed;
    return r;
}

} // namespace

TEST_CASE("ECDF basics")
{
    const auto e = ComputeEcdf({3.0, 1.0, 2.0});
    REQUIRE(e.size() == 3);
    CHECK(EvaluateEcdf(e, 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(EvaluateEcdf(e, 0.5) == 0.0);
    CHECK(EvaluateEcdf(e, 3.0) == 1.0);
    CHECK(EvaluateEcdf(e, 99.0) == 1.0);

    CHECK(ComputeEcdf({}).empty());
    const auto same = ComputeEcdf({5.0, 5.0, 5.0});
    REQUIRE(same.size() == 1);
    CHECK(same[0] == EcdfPoint{5.0, 1.0});

    CHECK_THROWS_AS(ComputeEcdf({-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(ComputeEcdf({std::nan("")}), std::invalid_argument);
}

TEST_CASE("ECDF is monotone and bounded")
{
    std::mt19937_64 gen(4);
    std::exponential_distribution<double> dist(2.0);
    std::vector<double> xs(500);
    for (auto& x : xs)
    {
        x = std::round(dist(gen) * 100.0) / 100.0;
    }
    const auto e = ComputeEcdf(xs);
    for (std::size_t i = 1; i < e.size(); ++i)
    {
        CHECK(e[i].x > e[i - 1].x);
        CHECK(e[i].f > e[i - 1].f);
    }
    CHECK(e.front().f > 0.0);
    CHECK(e.back().f == 1.0);
}

TEST_CASE("mean ECDF")
{
    const auto one = ComputeEcdf({1.0, 4.0});
    std::vector<Ecdf> single{one};
    CHECK(MeanEcdf(single) == one);
    std::vector<Ecdf> twins{one, one};
    CHECK(MeanEcdf(twins) == one);

    std::vector<Ecdf> steps{ComputeEcdf({1.0}), ComputeEcdf({3.0})};
    const auto mean = MeanEcdf(steps);
    CHECK(EvaluateEcdf(mean, 1.0) == 0.5);
    CHECK(EvaluateEcdf(mean, 2.9) == 0.5);
    CHECK(EvaluateEcdf(mean, 3.0) == 1.0);

    std::vector<Ecdf> withEmpty{ComputeEcdf({1.0}), Ecdf{}};
    CHECK(EvaluateEcdf(MeanEcdf(withEmpty), 2.0) == 0.5);
    CHECK_THROWS_AS(MeanEcdf({}), std::invalid_argument);
}

TEST_CASE("success time series")
{
    std::vector<AccessRecord> records{Done(0, 0, 500), Done(1, 0, 1500), Done(2, 0, 1700), Pending(3)};
    auto series = SuccessTimeSeries(records, 1.0);
    REQUIRE(series.size() == 2);
    CHECK(series[0] == TimeBin{0.0, 1});
    CHECK(series[1] == TimeBin{1.0, 2});

    series = SuccessTimeSeries(records, 0.5, 3.0);
    REQUIRE(series.size() == 6);
    std::uint64_t total = 0;
    for (const auto& b : series)
    {
        total += b.successes;
    }
    CHECK(total == 3);
    CHECK(series[2].startS == 1.0);

    std::vector<AccessRecord> none{Pending(0), Pending(1)};
    series = SuccessTimeSeries(none, 1.0, 4.0);
    REQUIRE(series.size() == 4);
    CHECK(std::all_of(series.begin(), series.end(), [](const TimeBin& b) { return b.successes == 0; }));
    CHECK_THROWS_AS(SuccessTimeSeries(none, 0.0), std::invalid_argument);
}

TEST_CASE("summary statistics")
{
    std::vector<AccessRecord> ones{Done(0, 0, 1000), Done(1, 0, 1000), Done(2, 0, 1000)};
    auto s = ComputeSummaryStats(ones);
    CHECK(s.meanS == 1.0);
    CHECK(s.stdS == 0.0);
    CHECK_FALSE(s.ratio.has_value());
    CHECK(s.successFraction == 1.0);

    std::vector<AccessRecord> pair{Done(0, 0, 1000), Done(1, 0, 3000), Pending(2), Pending(3, true)};
    s = ComputeSummaryStats(pair);
    CHECK(s.n == 4);
    CHECK(s.successes == 2);
    CHECK(s.meanS == 2.0);
    CHECK(*s.stdS == doctest::Approx(std::sqrt(2.0)));
    CHECK(*s.ratio == doctest::Approx(2.0 / std::sqrt(2.0)));
    CHECK(s.maxS == 3.0);
    CHECK(s.successFraction == 0.5);
    CHECK(s.failedFraction == 0.25);
    CHECK(s.unfinishedFraction == 0.25);
    CHECK(s.successFraction + s.failedFraction + s.unfinishedFraction == 1.0);

    std::vector<AccessRecord> lone{Done(0, 200, 700)};
    s = ComputeSummaryStats(lone);
    CHECK(s.meanS == 0.5);
    CHECK_FALSE(s.stdS.has_value());

    std::vector<AccessRecord> nothing{Pending(0)};
    s = ComputeSummaryStats(nothing);
    CHECK(s.successFraction == 0.0);
    CHECK_FALSE(s.meanS.has_value());
    CHECK(ComputeSummaryStats({}).n == 0);
}

TEST_CASE("summary statistics are permutation invariant")
{
    std::mt19937_64 gen(8);
    std::uniform_int_distribution<Subframe> end(17, 400000);
    std::vector<AccessRecord> records;
    for (std::uint32_t i = 0; i < 300; ++i)
    {
        records.push_back(i % 7 == 0 ? Pending(i) : Done(i, 0, end(gen)));
    }
    const auto reference = ComputeSummaryStats(records);
    for (int k = 0; k < 20; ++k)
    {
        std::shuffle(records.begin(), records.end(), gen);
        CHECK(ComputeSummaryStats(records) == reference);
    }
}
