// SPDX-License-Identifier: GPL-2.0-only

#ifndef RACHSIM_PROPAGATION_H
#define RACHSIM_PROPAGATION_H

#include "rachsim/config.h"
#include "rachsim/scenario.h"

#include <cstdint>
#include <ostream>
#include <stdexcept>

namespace rachsim
{

class DomainError : public std::domain_error
{
  public:
    using std::domain_error::domain_error;
};

struct LinkState
{
    std::uint32_t mtdId{0};
    int sector{0};
    double distanceM{0.0};
    double pathlossDb{0.0};
    double shadowingDb{0.0};
    double antennaGainDb{0.0};
    double wallLossDb{0.0};

    /// pathloss + wall loss + shadowing - antenna gain
    double TotalLossDb() const
    {
        return pathlossDb + wallLossDb + shadowingDb - antennaGainDb;
    }
};

/**
 * COST-231-Hata urban pathloss.
 *
 * L = 46.3 + 33.9 log10(f) - 13.82 log10(hb) - a(hm) + (44.9 - 6.55 log10(hb)) log10(d_km) + Cm
 * with the large-city mobile correction a(hm) = 3.2 (log10(11.75 hm))^2 - 4.97. Distances below
 * 1 m are evaluated at 1 m and the result never drops below free-space loss, so the value stays
 * positive and non-decreasing in distance and frequency.
 *
 * Throws DomainError for distance <= 0.
 */
double PathlossDb(double distanceM,
                  double frequencyMhz,
                  double baseHeightM = 30.0,
                  double mobileHeightM = 1.5,
                  double cmDb = 3.0);

double FreeSpacePathlossDb(double distanceM, double frequencyMhz);

/// External wall loss for the wall type plus `internalWalls` times the per-wall loss.
double WallLossDb(WallType wall, int internalWalls, const PropagationParams& params);

/**
 * Internal walls crossed by the ground-plane ray from the MTD towards `target`
 * before it leaves the building footprint, capped at params.maxInternalWalls.
 */
int InternalWallCrossings(const DevicePlacement& mtd,
                          const Building& building,
                          const Vec3& target,
                          const PropagationParams& params);

/// Penetration loss of the link; 0 dB for outdoor devices.
double WallLossDb(const DevicePlacement& mtd,
                  const Building* building,
                  const Vec3& target,
                  const PropagationParams& params);

/// Horizontal pattern max_gain - min(12 (dtheta / beamwidth)^2, A_m).
double AntennaGainDb(const Sector& sector, double bearingDeg, double frontToBackDb = 20.0);

/// Wraps an angle difference into [-180, 180).
double WrapDegrees(double angle);

/// Thermal noise -174 dBm/Hz + 10 log10(B) + NF.
double NoiseFloorDbm(double bandwidthHz, double noiseFigureDb);

double UplinkSnrDb(double txPowerDbm, const LinkState& link, double bandwidthHz, double noiseFigureDb);

/// Link evaluator over a generated deployment.
class PropagationModel
{
  public:
    PropagationModel(const ScenarioConfig& scenario,
                     const std::vector<Building>& buildings,
                     const Site& site,
                     const ShadowingTable& shadowing);

    LinkState Link(const DevicePlacement& mtd, int sector, double frequencyMhz) const;

    double DownlinkRxPowerDbm(const DevicePlacement& mtd, int sector) const;

    double EnbTxPowerDbm() const
    {
        return m_enbTxPowerDbm;
    }

  private:
    const ScenarioConfig& m_scenario;
    const std::vector<Building>& m_buildings;
    const Site& m_site;
    const ShadowingTable& m_shadowing;
    double m_enbTxPowerDbm;
};

/// CSV: id,serving_sector,total_loss_db,snr_at_max_power_db
void WriteLinkBudgetCsv(std::ostream& out, const ScenarioConfig& scenario, const Deployment& deployment);

} // namespace rachsim

#endif // RACHSIM_PROPAGATION_H
