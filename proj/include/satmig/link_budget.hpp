#pragma once

namespace satmig {

// All gains and losses are linear ratios. dB values only appear in reports.
struct LinkBudgetParams {
  double p_tx_w = 100.0;
  double g_tx = 31622.7766;      // 45 dBi
  double l_tx = 0.794328235;     // -1 dB feeder
  double g_rx = 912.010839;      // 29.6 dBi
  double f_rx_k = 290.0;
  double boltzmann_j_per_k = 1.380649e-23;
  double w_rf_hz = 100e6;
  double carrier_hz = 14e9;
  double total_bandwidth_hz = 100e6;
  double gamma_th = 10.0;

  void validate() const;
  friend bool operator==(const LinkBudgetParams&, const LinkBudgetParams&) = default;
};

/// Rain attenuation coefficients. Defaults are ITU-R P.838 horizontal
/// polarisation values near 14 GHz with a moderate 5 mm/h design rate.
struct RainModel {
  double alpha = 0.0374;
  double beta = 1.1396;
  double rain_rate_mm_h = 5.0;
  double antenna_height_km = 0.0;
  double effective_earth_radius_km = 8500.0;

  void validate() const;
  friend bool operator==(const RainModel&, const RainModel&) = default;
};

/// (c / (4 pi d f))^2. Throws std::domain_error for nonpositive inputs.
double free_space_gain(double distance_km, double carrier_hz);

/// Mean rain height in km. Uses |latitude| so both hemispheres behave alike.
double rain_height(double latitude_deg);

/// Slant path below the rain height. Returns 0 when the antenna sits at or
/// above the rain height. Throws std::domain_error for elevation outside (0, 90].
double slant_path(double rain_height_km, double antenna_height_km, double elevation_deg, double earth_radius_km);

double rain_gain(const RainModel& rain, double slant_km);

double snr(const LinkBudgetParams& params, double propagation_gain);

/// OFDMA share `b_fraction` of the total band at the given SNR, in bit/s.
double data_rate(double b_fraction, const LinkBudgetParams& params, double snr_linear);

/// Free-space times rain gain for a user at the given latitude and height.
double propagation_gain(const LinkBudgetParams& params, const RainModel& rain, double distance_km,
                        double elevation_deg, double user_lat_deg, double user_alt_km);

double to_db(double ratio);

}  // namespace satmig
