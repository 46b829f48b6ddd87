#pragma once

#include <cmath>
#include <vector>

namespace satmig {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  double norm() const { return std::sqrt(dot(*this)); }

  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

/// Walker-delta S/S/F constellation on circular orbits. Plane k carries one
/// satellite with RAAN k*raan_spacing_deg and in-plane phase k*phasing_factor*360/S.
struct ConstellationConfig {
  int num_satellites = 8;
  double altitude_km = 20184.0;
  double inclination_deg = 53.0;
  double raan_spacing_deg = 45.0;
  double phasing_factor = 1.0;
  double epoch_gmst_deg = 0.0;
  double earth_radius_km = 6378.137;
  double mu_earth_km3s2 = 398600.4418;
  double earth_rotation_rad_s = 7.2921150e-5;

  double orbit_radius_km() const { return earth_radius_km + altitude_km; }
  double orbital_period_s() const;

  /// Throws ConfigError naming the first violated field.
  void validate() const;

  friend bool operator==(const ConstellationConfig&, const ConstellationConfig&) = default;
};

struct SatelliteState {
  int sat_id = 0;
  Vec3 position_ecef_km;
  int slot = 0;
};

/// Point on (or above) the spherical Earth.
struct GeodeticPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;
  double alt_km = 0.0;

  friend bool operator==(const GeodeticPoint&, const GeodeticPoint&) = default;
};

/// Earth-centred inertial position of satellite `sat_id` at `t_s` seconds past epoch.
Vec3 inertial_position(const ConstellationConfig& config, int sat_id, double t_s);

/// Rotates an inertial vector into the Earth-fixed frame at `t_s`.
Vec3 to_earth_fixed(const ConstellationConfig& config, const Vec3& inertial, double t_s);

/// Positions of all satellites at the start of `slot`. Pure function of its arguments.
std::vector<SatelliteState> propagate(const ConstellationConfig& config, int slot, double slot_seconds);

GeodeticPoint subsatellite_point(const SatelliteState& sat, double earth_radius_km);
Vec3 to_ecef(const GeodeticPoint& p, double earth_radius_km);

/// Great-circle separation in radians, haversine form (exactly 0 for identical lat/lon).
double central_angle_rad(const GeodeticPoint& a, const GeodeticPoint& b);

/// Elevation in degrees from the cosine/sine of the Earth-central angle and the
/// ratio r_user/r_sat. When the sub-satellite point coincides with the user the
/// denominator vanishes and the result is exactly +90.
double elevation_from_central_angle(double cos_central, double sin_central, double radius_ratio);

/// Literal form where the equatorial-orbit central angle is cos(psi)*cos(phi).
double elevation_equatorial(double psi_deg, double lat_deg, double radius_ratio);

double elevation_angle(const SatelliteState& sat, const GeodeticPoint& user, const ConstellationConfig& config);

double slant_range_km(const SatelliteState& sat, const GeodeticPoint& user, const ConstellationConfig& config);

bool visible(const SatelliteState& sat, const GeodeticPoint& user, double theta_min_deg,
             const ConstellationConfig& config);

}  // namespace satmig
