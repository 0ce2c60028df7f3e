// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/scenario.h"

#include "rachsim/propagation.h"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace rachsim
{

namespace
{

// Split the apartments of a floor into a columns x rows grid, as square as possible.
std::pair<int, int>
ApartmentGrid(int apartments)
{
    int columns = 1;
    for (int d = 1; d * d <= apartments; ++d)
    {
        if (apartments % d == 0)
        {
            columns = d;
        }
    }
    return {columns, apartments / columns};
}

} // namespace

double
Distance3d(const Vec3& a, const Vec3& b)
{
    return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

Rect
Building::ApartmentCell(int apartment) const
{
    int column = apartment % apartmentColumns;
    int row = apartment / apartmentColumns;
    double cellWidth = footprint.Width() / apartmentColumns;
    double cellDepth = footprint.Depth() / apartmentRows;
    return {footprint.xMin + column * cellWidth,
            footprint.yMin + row * cellDepth,
            footprint.xMin + (column + 1) * cellWidth,
            footprint.yMin + (row + 1) * cellDepth};
}

ShadowingTable::ShadowingTable(std::size_t numMtds, std::size_t numSectors, double sigmaDb, RngStream& rng)
    : m_numSectors(numSectors),
      m_values(numMtds * numSectors)
{
    for (auto& value : m_values)
    {
        value = rng.Normal(0.0, sigmaDb);
    }
}

double
ShadowingTable::At(std::uint32_t mtd, std::size_t sector) const
{
    return m_values.at(mtd * m_numSectors + sector);
}

const Building*
Deployment::BuildingOf(const DevicePlacement& mtd) const
{
    if (!mtd.buildingId)
    {
        return nullptr;
    }
    return &buildings.at(*mtd.buildingId);
}

std::vector<Building>
BuildCityGrid(const ScenarioConfig& scenario)
{
    const double gridWidth =
        scenario.gridColumns * scenario.buildingWidthM + (scenario.gridColumns - 1) * scenario.streetWidthM;
    const double gridDepth =
        scenario.gridRows * scenario.buildingDepthM + (scenario.gridRows - 1) * scenario.streetWidthM;
    if (gridWidth > scenario.areaWidthM || gridDepth > scenario.areaHeightM)
    {
        std::ostringstream msg;
        msg << "building grid " << gridWidth << " m x " << gridDepth << " m does not fit the "
            << scenario.areaWidthM << " m x " << scenario.areaHeightM << " m deployment area";
        throw GeometryError(msg.str());
    }

    const auto [columns, rows] = ApartmentGrid(scenario.apartmentsPerFloor);
    const double x0 = (scenario.areaWidthM - gridWidth) / 2.0;
    const double y0 = (scenario.areaHeightM - gridDepth) / 2.0;
    const double pitchX = scenario.buildingWidthM + scenario.streetWidthM;
    const double pitchY = scenario.buildingDepthM + scenario.streetWidthM;

    std::vector<Building> buildings;
    buildings.reserve(scenario.gridColumns * scenario.gridRows);
    for (int row = 0; row < scenario.gridRows; ++row)
    {
        for (int column = 0; column < scenario.gridColumns; ++column)
        {
            Building b;
            b.footprint = {x0 + column * pitchX,
                           y0 + row * pitchY,
                           x0 + column * pitchX + scenario.buildingWidthM,
                           y0 + row * pitchY + scenario.buildingDepthM};
            b.floors = scenario.floorsPerBuilding;
            b.apartmentsPerFloor = scenario.apartmentsPerFloor;
            b.apartmentColumns = columns;
            b.apartmentRows = rows;
            b.floorHeightM = scenario.floorHeightM;
            b.externalWall = scenario.wallType;
            buildings.push_back(b);
        }
    }
    return buildings;
}

Site
BuildSite(const ScenarioConfig& scenario)
{
    Site site;
    site.position = {scenario.areaWidthM / 2.0, scenario.areaHeightM / 2.0, scenario.siteHeightM};
    for (double azimuth : scenario.sectorAzimuthsDeg)
    {
        site.sectors.push_back({azimuth, scenario.sectorBeamwidthDeg, scenario.propagation.sectorMaxGainDbi});
    }
    return site;
}

Deployment
GenerateDeployment(const ScenarioConfig& scenario, RngStream& placementRng, RngStream& shadowingRng)
{
    Deployment deployment;
    deployment.buildings = BuildCityGrid(scenario);
    deployment.site = BuildSite(scenario);

    const auto numBuildings = static_cast<std::int64_t>(deployment.buildings.size());
    deployment.mtds.reserve(scenario.numMtds);
    for (int id = 0; id < scenario.numMtds; ++id)
    {
        auto buildingId = static_cast<std::uint32_t>(placementRng.UniformInt(0, numBuildings - 1));
        const Building& building = deployment.buildings[buildingId];
        int floor = static_cast<int>(placementRng.UniformInt(0, building.floors - 1));
        int apartment = static_cast<int>(placementRng.UniformInt(0, building.apartmentsPerFloor - 1));
        Rect cell = building.ApartmentCell(apartment);
        double x = placementRng.Uniform(cell.xMin, cell.xMax);
        double y = placementRng.Uniform(cell.yMin, cell.yMax);

        DevicePlacement mtd;
        mtd.id = static_cast<std::uint32_t>(id);
        mtd.position = {x, y, floor * building.floorHeightM + scenario.mtdHeightAboveFloorM};
        mtd.indoor = true;
        mtd.buildingId = buildingId;
        mtd.floor = floor;
        mtd.apartment = apartment;
        deployment.mtds.push_back(mtd);
    }

    deployment.shadowing = ShadowingTable(deployment.mtds.size(),
                                          deployment.site.sectors.size(),
                                          scenario.shadowingSigmaDb,
                                          shadowingRng);

    PropagationModel propagation(scenario, deployment.buildings, deployment.site, deployment.shadowing);
    deployment.servingSector.reserve(deployment.mtds.size());
    for (const auto& mtd : deployment.mtds)
    {
        deployment.servingSector.push_back(SelectServingSector(mtd, deployment.site, propagation));
    }
    return deployment;
}

int
SelectServingSector(const DevicePlacement& mtd, const Site& site, const PropagationModel& propagation)
{
    int best = 0;
    double bestPower = propagation.DownlinkRxPowerDbm(mtd, 0);
    for (int s = 1; s < static_cast<int>(site.sectors.size()); ++s)
    {
        double power = propagation.DownlinkRxPowerDbm(mtd, s);
        if (power > bestPower)
        {
            bestPower = power;
            best = s;
        }
    }
    return best;
}

void
WriteDeploymentCsv(std::ostream& out, const Deployment& deployment)
{
    out << "id,x,y,z,building_id,floor,serving_sector\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& mtd : deployment.mtds)
    {
        out << mtd.id << ',' << mtd.position.x << ',' << mtd.position.y << ',' << mtd.position.z << ',';
        if (mtd.buildingId)
        {
            out << *mtd.buildingId;
        }
        out << ',';
        if (mtd.floor)
        {
            out << *mtd.floor;
        }
        out << ',' << deployment.servingSector.at(mtd.id) << '\n';
    }
}

} // namespace rachsim
