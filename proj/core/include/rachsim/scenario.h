// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_SCENARIO_H
#define RACHSIM_SCENARIO_H

#include "rachsim/config.h"
#include "rachsim/random.h"

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace rachsim
{

class PropagationModel;

struct Vec3
{
    double x{0.0};
    double y{0.0};
    double z{0.0};

    bool operator==(const Vec3&) const = default;
};

double Distance3d(const Vec3& a, const Vec3& b);

/// Axis-aligned rectangle in the ground plane.
struct Rect
{
    double xMin{0.0};
    double yMin{0.0};
    double xMax{0.0};
    double yMax{0.0};

    double Width() const
    {
        return xMax - xMin;
    }

    double Depth() const
    {
        return yMax - yMin;
    }

    bool Contains(double x, double y) const
    {
        return x >= xMin && x <= xMax && y >= yMin && y <= yMax;
    }

    bool operator==(const Rect&) const = default;
};

struct Building
{
    Rect footprint;
    int floors{3};
    int apartmentsPerFloor{6};
    /// Apartment grid; apartmentColumns x apartmentRows == apartmentsPerFloor.
    int apartmentColumns{2};
    int apartmentRows{3};
    double floorHeightM{3.0};
    WallType externalWall{WallType::ConcreteWithWindows};

    Rect ApartmentCell(int apartment) const;

    bool operator==(const Building&) const = default;
};

struct DevicePlacement
{
    std::uint32_t id{0};
    Vec3 position;
    bool indoor{true};
    std::optional<std::uint32_t> buildingId;
    std::optional<int> floor;
    std::optional<int> apartment;

    bool operator==(const DevicePlacement&) const = default;
};

struct Sector
{
    double azimuthDeg{0.0};
    double beamwidthDeg{65.0};
    double maxGainDbi{14.0};

    bool operator==(const Sector&) const = default;
};

struct Site
{
    Vec3 position;
    std::vector<Sector> sectors;

    bool operator==(const Site&) const = default;
};

/// Per-(MTD, sector) log-normal shadowing, drawn once and frozen for the run.
class ShadowingTable
{
  public:
    ShadowingTable() = default;
    ShadowingTable(std::size_t numMtds, std::size_t numSectors, double sigmaDb, RngStream& rng);

    double At(std::uint32_t mtd, std::size_t sector) const;

    std::size_t NumMtds() const
    {
        return m_numSectors == 0 ? 0 : m_values.size() / m_numSectors;
    }

    const std::vector<double>& Values() const
    {
        return m_values;
    }

    bool operator==(const ShadowingTable&) const = default;

  private:
    std::size_t m_numSectors{0};
    std::vector<double> m_values;
};

struct Deployment
{
    std::vector<Building> buildings;
    std::vector<DevicePlacement> mtds;
    Site site;
    ShadowingTable shadowing;
    /// Indexed by MTD id.
    std::vector<int> servingSector;

    const Building* BuildingOf(const DevicePlacement& mtd) const;

    bool operator==(const Deployment&) const = default;
};

class GeometryError : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Regular building grid centred in the deployment area.
std::vector<Building> BuildCityGrid(const ScenarioConfig& scenario);

Site BuildSite(const ScenarioConfig& scenario);

/**
 * Generate buildings, indoor MTD placements, the co-located 3-sector site, the
 * shadowing table and the serving-sector map. Pure function of
 * (scenario, rng state).
 */
Deployment GenerateDeployment(const ScenarioConfig& scenario, RngStream& placementRng, RngStream& shadowingRng);

/// argmax over sectors of downlink received power; ties go to the lowest index.
int SelectServingSector(const DevicePlacement& mtd, const Site& site, const PropagationModel& propagation);

/// CSV: id,x,y,z,building_id,floor,serving_sector
void WriteDeploymentCsv(std::ostream& out, const Deployment& deployment);

} // namespace rachsim

#endif // RACHSIM_SCENARIO_H
