// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/propagation.h"
#include "rachsim/scenario.h"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace rachsim;

namespace
{

Deployment
Generate(const ScenarioConfig& scenario, std::uint64_t seed)
{
    RngStream placement(seed);
    RngStream shadowing(seed + 1);
    return GenerateDeployment(scenario, placement, shadowing);
}

} // namespace

TEST_CASE("city grid fits the area without overlaps")
{
    ScenarioConfig s;
    const auto buildings = BuildCityGrid(s);
    REQUIRE(buildings.size() == 96);
    for (std::size_t i = 0; i < buildings.size(); ++i)
    {
        const auto& a = buildings[i].footprint;
        CHECK(a.xMin >= 0.0);
        CHECK(a.yMin >= 0.0);
        CHECK(a.xMax <= s.areaWidthM);
        CHECK(a.yMax <= s.areaHeightM);
        CHECK(a.Width() == doctest::Approx(25.0));
        CHECK(a.Depth() == doctest::Approx(50.0));
        CHECK(buildings[i].apartmentColumns * buildings[i].apartmentRows == 6);
        for (std::size_t j = i + 1; j < buildings.size(); ++j)
        {
            const auto& b = buildings[j].footprint;
            const bool apart = a.xMax + 10.0 <= b.xMin + 1e-9 || b.xMax + 10.0 <= a.xMin + 1e-9 ||
                               a.yMax + 10.0 <= b.yMin + 1e-9 || b.yMax + 10.0 <= a.yMin + 1e-9;
            CHECK(apart);
        }
    }

    s.areaWidthM = 300.0;
    CHECK_THROWS_AS(BuildCityGrid(s), GeometryError);
}

TEST_CASE("site sits at the area centre with three sectors")
{
    ScenarioConfig s;
    const Site site = BuildSite(s);
    CHECK(site.position == Vec3{250.0, 250.0, 30.0});
    REQUIRE(site.sectors.size() == 3);
    CHECK(site.sectors[1].azimuthDeg == 120.0);
    CHECK(site.sectors[2].beamwidthDeg == 65.0);
}

TEST_CASE("MTDs are placed inside apartments")
{
    ScenarioConfig s;
    s.numMtds = 600;
    const auto d = Generate(s, 11);
    REQUIRE(d.mtds.size() == 600);
    REQUIRE(d.servingSector.size() == 600);
    for (const auto& m : d.mtds)
    {
        REQUIRE(m.indoor);
        const Building* b = d.BuildingOf(m);
        REQUIRE(b != nullptr);
        CHECK(b->footprint.Contains(m.position.x, m.position.y));
        CHECK(b->ApartmentCell(*m.apartment).Contains(m.position.x, m.position.y));
        CHECK(*m.floor >= 0);
        CHECK(*m.floor < 3);
        CHECK(m.position.z == doctest::Approx(*m.floor * 3.0 + 1.5));
    }
}

TEST_CASE("apartment cells tile the footprint")
{
    Building b;
    b.footprint = {0.0, 0.0, 25.0, 50.0};
    double area = 0.0;
    for (int a = 0; a < 6; ++a)
    {
        const Rect cell = b.ApartmentCell(a);
        area += cell.Width() * cell.Depth();
        CHECK(cell.Width() == doctest::Approx(12.5));
    }
    CHECK(area == doctest::Approx(25.0 * 50.0));
}

TEST_CASE("shadowing table statistics")
{
    RngStream rng(3);
    ShadowingTable table(2000, 3, 8.0, rng);
    CHECK(table.NumMtds() == 2000);
    double sum = 0.0;
    double sq = 0.0;
    for (double v : table.Values())
    {
        sum += v;
        sq += v * v;
    }
    const double n = static_cast<double>(table.Values().size());
    CHECK(std::abs(sum / n) < 0.4);
    CHECK(std::sqrt(sq / n) == doctest::Approx(8.0).epsilon(0.04));
    CHECK(table.At(1999, 2) == table.Values().back());
}

TEST_CASE("serving sector is the strongest downlink")
{
    ScenarioConfig s;
    s.numMtds = 300;
    const auto d = Generate(s, 5);
    PropagationModel model(s, d.buildings, d.site, d.shadowing);
    for (const auto& m : d.mtds)
    {
        const int serving = d.servingSector[m.id];
        for (int k = 0; k < 3; ++k)
        {
            CHECK(model.DownlinkRxPowerDbm(m, serving) >= model.DownlinkRxPowerDbm(m, k));
        }
    }
}

TEST_CASE("sector shares are balanced without shadowing")
{
    ScenarioConfig s;
    s.numMtds = 6000;
    s.shadowingSigmaDb = 0.0;
    const auto d = Generate(s, 9);
    int counts[3] = {0, 0, 0};
    for (int sector : d.servingSector)
    {
        ++counts[sector];
    }
    for (int c : counts)
    {
        CHECK(std::abs(c / 6000.0 - 1.0 / 3.0) < 0.05);
    }
}

TEST_CASE("deployment is a pure function of the streams")
{
    ScenarioConfig s;
    s.numMtds = 50;
    CHECK(Generate(s, 21) == Generate(s, 21));
    CHECK_FALSE(Generate(s, 21) == Generate(s, 22));

    std::ostringstream csv;
    WriteDeploymentCsv(csv, Generate(s, 21));
    CHECK(csv.str().rfind("id,x,y,z,building_id,floor,serving_sector\n", 0) == 0);
    int lines = 0;
    for (char c : csv.str())
    {
        lines += c == '\n';
    }
    CHECK(lines == 51);
}
