// SPDX-License-Identifier: GPL-2.0-only

#include "rachsim/propagation.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

namespace rachsim
{

double
FreeSpacePathlossDb(double distanceM, double frequencyMhz)
{
    return 20.0 * std::log10(distanceM) + 20.0 * std::log10(frequencyMhz) - 27.55;
}

double
PathlossDb(double distanceM, double frequencyMhz, double baseHeightM, double mobileHeightM, double cmDb)
{
    if (!(distanceM > 0.0) || !std::isfinite(distanceM))
    {
        throw DomainError("pathloss distance must be > 0");
    }
    const double d = std::max(distanceM, 1.0);
    const double logF = std::log10(frequencyMhz);
    const double logHb = std::log10(baseHeightM);
    const double mobileCorrection = 3.2 * std::pow(std::log10(11.75 * mobileHeightM), 2) - 4.97;
    const double hata = 46.3 + 33.9 * logF - 13.82 * logHb - mobileCorrection +
                        (44.9 - 6.55 * logHb) * std::log10(d / 1000.0) + cmDb;
    return std::max(hata, FreeSpacePathlossDb(d, frequencyMhz));
}

double
WallLossDb(WallType wall, int internalWalls, const PropagationParams& params)
{
    return params.externalWallLossDb[static_cast<std::size_t>(wall)] + internalWalls * params.internalWallLossDb;
}

int
InternalWallCrossings(const DevicePlacement& mtd,
                      const Building& building,
                      const Vec3& target,
                      const PropagationParams& params)
{
    const Rect& fp = building.footprint;
    const double px = mtd.position.x;
    const double py = mtd.position.y;
    const double vx = target.x - px;
    const double vy = target.y - py;

    auto exitParameter = [](double from, double velocity, double lo, double hi) {
        if (velocity > 0.0)
        {
            return (hi - from) / velocity;
        }
        if (velocity < 0.0)
        {
            return (lo - from) / velocity;
        }
        return std::numeric_limits<double>::infinity();
    };
    const double s = std::clamp(
        std::min(exitParameter(px, vx, fp.xMin, fp.xMax), exitParameter(py, vy, fp.yMin, fp.yMax)), 0.0, 1.0);
    const double ex = px + s * vx;
    const double ey = py + s * vy;

    auto linesBetween = [](double a, double b, double origin, double pitch, int cells) {
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        int count = 0;
        for (int k = 1; k < cells; ++k)
        {
            double line = origin + k * pitch;
            if (line > lo && line < hi)
            {
                ++count;
            }
        }
        return count;
    };
    int walls = linesBetween(px, ex, fp.xMin, fp.Width() / building.apartmentColumns, building.apartmentColumns) +
                linesBetween(py, ey, fp.yMin, fp.Depth() / building.apartmentRows, building.apartmentRows);
    return std::min(walls, params.maxInternalWalls);
}

double
WallLossDb(const DevicePlacement& mtd, const Building* building, const Vec3& target, const PropagationParams& params)
{
    if (!mtd.indoor || building == nullptr)
    {
        return 0.0;
    }
    return WallLossDb(building->externalWall, InternalWallCrossings(mtd, *building, target, params), params);
}

double
WrapDegrees(double angle)
{
    double wrapped = std::fmod(angle + 180.0, 360.0);
    if (wrapped < 0.0)
    {
        wrapped += 360.0;
    }
    return wrapped - 180.0;
}

double
AntennaGainDb(const Sector& sector, double bearingDeg, double frontToBackDb)
{
    const double offset = WrapDegrees(bearingDeg - sector.azimuthDeg) / sector.beamwidthDeg;
    return sector.maxGainDbi - std::min(12.0 * offset * offset, frontToBackDb);
}

double
NoiseFloorDbm(double bandwidthHz, double noiseFigureDb)
{
    return -174.0 + 10.0 * std::log10(bandwidthHz) + noiseFigureDb;
}

double
UplinkSnrDb(double txPowerDbm, const LinkState& link, double bandwidthHz, double noiseFigureDb)
{
    return txPowerDbm - link.TotalLossDb() - NoiseFloorDbm(bandwidthHz, noiseFigureDb);
}

PropagationModel::PropagationModel(const ScenarioConfig& scenario,
                                   const std::vector<Building>& buildings,
                                   const Site& site,
                                   const ShadowingTable& shadowing)
    : m_scenario(scenario),
      m_buildings(buildings),
      m_site(site),
      m_shadowing(shadowing),
      m_enbTxPowerDbm(scenario.enbTxPowerDbm)
{
}

LinkState
PropagationModel::Link(const DevicePlacement& mtd, int sector, double frequencyMhz) const
{
    const auto& params = m_scenario.propagation;
    LinkState link;
    link.mtdId = mtd.id;
    link.sector = sector;
    link.distanceM = Distance3d(m_site.position, mtd.position);
    link.pathlossDb = PathlossDb(link.distanceM, frequencyMhz, m_site.position.z, mtd.position.z, params.hataCmDb);
    const Building* building = mtd.buildingId ? &m_buildings.at(*mtd.buildingId) : nullptr;
    link.wallLossDb = WallLossDb(mtd, building, m_site.position, params);
    link.shadowingDb = m_shadowing.At(mtd.id, static_cast<std::size_t>(sector));
    const double bearing = std::atan2(mtd.position.y - m_site.position.y, mtd.position.x - m_site.position.x) *
                           180.0 / std::numbers::pi;
    link.antennaGainDb = AntennaGainDb(m_site.sectors.at(sector), bearing, params.frontToBackDb);
    return link;
}

double
PropagationModel::DownlinkRxPowerDbm(const DevicePlacement& mtd, int sector) const
{
    return m_enbTxPowerDbm - Link(mtd, sector, m_scenario.dlCarrierFreqMhz).TotalLossDb();
}

void
WriteLinkBudgetCsv(std::ostream& out, const ScenarioConfig& scenario, const Deployment& deployment)
{
    PropagationModel model(scenario, deployment.buildings, deployment.site, deployment.shadowing);
    const double prachBandwidthHz = 6.0 * scenario.rbBandwidthKhz * 1e3;
    out << "id,serving_sector,total_loss_db,snr_at_max_power_db\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& mtd : deployment.mtds)
    {
        int sector = deployment.servingSector.at(mtd.id);
        LinkState link = model.Link(mtd, sector, scenario.ulCarrierFreqMhz);
        out << mtd.id << ',' << sector << ',' << link.TotalLossDb() << ','
            << UplinkSnrDb(scenario.mtdMaxTxPowerDbm, link, prachBandwidthHz, scenario.enbNoiseFigureDb) << '\n';
    }
}

} // namespace rachsim
