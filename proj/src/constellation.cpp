#include "satmig/constellation.hpp"

#include <algorithm>

#include "satmig/errors.hpp"
#include "satmig/units.hpp"

namespace satmig {

double ConstellationConfig::orbital_period_s() const {
  const double a = orbit_radius_km();
  return 2.0 * kPi * std::sqrt(a * a * a / mu_earth_km3s2);
}

void ConstellationConfig::validate() const {
  if (num_satellites < 1) throw ConfigError("constellation.num_satellites: must be >= 1");
  if (!(altitude_km > 0.0)) throw ConfigError("constellation.altitude_km: must be > 0");
  if (!(inclination_deg >= 0.0 && inclination_deg <= 180.0))
    throw ConfigError("constellation.inclination_deg: must lie in [0, 180]");
  if (!(earth_radius_km > 0.0)) throw ConfigError("constellation.earth_radius_km: must be > 0");
  if (!(mu_earth_km3s2 > 0.0)) throw ConfigError("constellation.mu_earth_km3s2: must be > 0");
  if (!std::isfinite(raan_spacing_deg)) throw ConfigError("constellation.raan_spacing_deg: must be finite");
  if (!std::isfinite(phasing_factor)) throw ConfigError("constellation.phasing_factor: must be finite");
  if (!std::isfinite(epoch_gmst_deg)) throw ConfigError("constellation.epoch_gmst_deg: must be finite");
  if (!std::isfinite(earth_rotation_rad_s))
    throw ConfigError("constellation.earth_rotation_rad_s: must be finite");
  const double period = orbital_period_s();
  if (!std::isfinite(period) || period <= 0.0) throw ConfigError("constellation: orbital period is not finite");
}

Vec3 inertial_position(const ConstellationConfig& config, int sat_id, double t_s) {
  const double r = config.orbit_radius_km();
  const double mean_motion = 2.0 * kPi / config.orbital_period_s();
  const double raan = deg2rad(sat_id * config.raan_spacing_deg);
  const double phase0 = deg2rad(sat_id * config.phasing_factor * 360.0 / config.num_satellites);
  const double u = phase0 + mean_motion * t_s;  // argument of latitude
  const double inc = deg2rad(config.inclination_deg);

  const double cu = std::cos(u), su = std::sin(u);
  const double co = std::cos(raan), so = std::sin(raan);
  const double ci = std::cos(inc), si = std::sin(inc);
  return {r * (co * cu - so * su * ci), r * (so * cu + co * su * ci), r * (su * si)};
}

Vec3 to_earth_fixed(const ConstellationConfig& config, const Vec3& inertial, double t_s) {
  const double gmst = deg2rad(config.epoch_gmst_deg) + config.earth_rotation_rad_s * t_s;
  const double c = std::cos(gmst), s = std::sin(gmst);
  return {c * inertial.x + s * inertial.y, -s * inertial.x + c * inertial.y, inertial.z};
}

std::vector<SatelliteState> propagate(const ConstellationConfig& config, int slot, double slot_seconds) {
  if (slot < 0) throw ConfigError("propagate: slot must be >= 0");
  if (!(slot_seconds > 0.0)) throw ConfigError("propagate: slot_seconds must be > 0");
  config.validate();

  const double t = slot * slot_seconds;
  std::vector<SatelliteState> out;
  out.reserve(static_cast<std::size_t>(config.num_satellites));
  for (int k = 0; k < config.num_satellites; ++k) {
    out.push_back({k, to_earth_fixed(config, inertial_position(config, k, t), t), slot});
  }
  return out;
}

GeodeticPoint subsatellite_point(const SatelliteState& sat, double earth_radius_km) {
  const Vec3& p = sat.position_ecef_km;
  const double r = p.norm();
  return {rad2deg(std::asin(p.z / r)), rad2deg(std::atan2(p.y, p.x)), r - earth_radius_km};
}

Vec3 to_ecef(const GeodeticPoint& p, double earth_radius_km) {
  const double r = earth_radius_km + p.alt_km;
  const double lat = deg2rad(p.lat_deg), lon = deg2rad(p.lon_deg);
  return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat)};
}

double central_angle_rad(const GeodeticPoint& a, const GeodeticPoint& b) {
  const double lat1 = deg2rad(a.lat_deg), lat2 = deg2rad(b.lat_deg);
  const double dlat = lat2 - lat1;
  const double dlon = deg2rad(b.lon_deg - a.lon_deg);
  const double s1 = std::sin(dlat / 2.0), s2 = std::sin(dlon / 2.0);
  const double h = std::clamp(s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2, 0.0, 1.0);
  return 2.0 * std::atan2(std::sqrt(h), std::sqrt(1.0 - h));
}

double elevation_from_central_angle(double cos_central, double sin_central, double radius_ratio) {
  const double numerator = cos_central - radius_ratio;
  if (sin_central <= 0.0) return numerator >= 0.0 ? 90.0 : -90.0;
  return rad2deg(std::atan(numerator / sin_central));
}

double elevation_equatorial(double psi_deg, double lat_deg, double radius_ratio) {
  const double c = std::cos(deg2rad(psi_deg)) * std::cos(deg2rad(lat_deg));
  return elevation_from_central_angle(c, std::sqrt(std::max(0.0, 1.0 - c * c)), radius_ratio);
}

double elevation_angle(const SatelliteState& sat, const GeodeticPoint& user, const ConstellationConfig& config) {
  const GeodeticPoint ssp = subsatellite_point(sat, config.earth_radius_km);
  const double gamma = central_angle_rad(ssp, user);
  const double ratio = (config.earth_radius_km + user.alt_km) / sat.position_ecef_km.norm();
  return elevation_from_central_angle(std::cos(gamma), std::sin(gamma), ratio);
}

double slant_range_km(const SatelliteState& sat, const GeodeticPoint& user, const ConstellationConfig& config) {
  const GeodeticPoint ssp = subsatellite_point(sat, config.earth_radius_km);
  const double gamma = central_angle_rad(ssp, user);
  const double rs = sat.position_ecef_km.norm();
  const double ru = config.earth_radius_km + user.alt_km;
  return std::sqrt(std::max(0.0, rs * rs + ru * ru - 2.0 * rs * ru * std::cos(gamma)));
}

bool visible(const SatelliteState& sat, const GeodeticPoint& user, double theta_min_deg,
             const ConstellationConfig& config) {
  return elevation_angle(sat, user, config) >= theta_min_deg;
}

}  // namespace satmig
