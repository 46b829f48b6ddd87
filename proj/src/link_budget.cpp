#include "satmig/link_budget.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "satmig/errors.hpp"
#include "satmig/units.hpp"

namespace satmig {

void LinkBudgetParams::validate() const {
  auto positive = [](double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string("link_budget.") + field + ": must be > 0");
  };
  positive(p_tx_w, "p_tx_w");
  positive(g_tx, "g_tx");
  positive(l_tx, "l_tx");
  if (l_tx > 1.0) throw ConfigError("link_budget.l_tx: must lie in (0, 1]");
  positive(g_rx, "g_rx");
  positive(f_rx_k, "f_rx_k");
  positive(boltzmann_j_per_k, "boltzmann_j_per_k");
  positive(w_rf_hz, "w_rf_hz");
  positive(carrier_hz, "carrier_hz");
  positive(total_bandwidth_hz, "total_bandwidth_hz");
  positive(gamma_th, "gamma_th");
}

void RainModel::validate() const {
  if (!(alpha >= 0.0)) throw ConfigError("rain.alpha: must be >= 0");
  if (!(beta > 0.0)) throw ConfigError("rain.beta: must be > 0");
  if (!(rain_rate_mm_h >= 0.0)) throw ConfigError("rain.rain_rate_mm_h: must be >= 0");
  if (!(antenna_height_km >= 0.0)) throw ConfigError("rain.antenna_height_km: must be >= 0");
  if (!(effective_earth_radius_km > 0.0)) throw ConfigError("rain.effective_earth_radius_km: must be > 0");
}

double free_space_gain(double distance_km, double carrier_hz) {
  if (!(distance_km > 0.0) || !(carrier_hz > 0.0))
    throw std::domain_error("free_space_gain: distance and carrier must be positive");
  const double ratio = kSpeedOfLightMps / (4.0 * kPi * distance_km * 1e3 * carrier_hz);
  return ratio * ratio;
}

double rain_height(double latitude_deg) {
  const double lat = std::abs(latitude_deg);
  if (lat <= 23.0) return 5.0;
  return std::max(0.0, 5.0 - 0.075 * (lat - 23.0));
}

double slant_path(double rain_height_km, double antenna_height_km, double elevation_deg, double earth_radius_km) {
  if (!(elevation_deg > 0.0) || elevation_deg > 90.0)
    throw std::domain_error("slant_path: elevation must lie in (0, 90]");
  const double dh = rain_height_km - antenna_height_km;
  if (dh <= 0.0) return 0.0;
  const double s = std::sin(deg2rad(elevation_deg));
  if (elevation_deg >= 5.0) return dh / s;
  return 2.0 * dh / (std::sqrt(s * s + 2.0 * dh / earth_radius_km) + s);
}

double rain_gain(const RainModel& rain, double slant_km) {
  if (rain.rain_rate_mm_h <= 0.0 || slant_km <= 0.0) return 1.0;
  const double specific_db_per_km = rain.alpha * std::pow(rain.rain_rate_mm_h, rain.beta);
  return std::pow(10.0, -specific_db_per_km * slant_km / 10.0);
}

double snr(const LinkBudgetParams& p, double propagation_gain) {
  return p.p_tx_w * p.g_tx * p.l_tx * p.g_rx * propagation_gain / (p.boltzmann_j_per_k * p.f_rx_k * p.w_rf_hz);
}

double data_rate(double b_fraction, const LinkBudgetParams& params, double snr_linear) {
  if (b_fraction <= 0.0) return 0.0;
  return b_fraction * params.total_bandwidth_hz * std::log2(1.0 + snr_linear);
}

double propagation_gain(const LinkBudgetParams& params, const RainModel& rain, double distance_km,
                        double elevation_deg, double user_lat_deg, double user_alt_km) {
  const double antenna = std::max(user_alt_km, rain.antenna_height_km);
  // A zero threshold admits horizon-grazing links; keep them on the low-angle branch.
  const double elev = std::clamp(elevation_deg, 1e-6, 90.0);
  const double slant = slant_path(rain_height(user_lat_deg), antenna, elev, rain.effective_earth_radius_km);
  return free_space_gain(distance_km, params.carrier_hz) * rain_gain(rain, slant);
}

double to_db(double ratio) { return 10.0 * std::log10(ratio); }

}  // namespace satmig
