#pragma once

// Data-parallel kernels used on the environment hot path. Each kernel has a
// serial reference in `serial::` and an OpenMP version in `omp::` that must
// produce bit-identical output; tests compare the two.

#include <span>
#include <vector>

#include "satmig/constellation.hpp"
#include "satmig/link_budget.hpp"

namespace satmig {

/// Row-major [user][satellite] geometry for one slot.
struct GeometryTable {
  int num_users = 0;
  int num_sats = 0;
  std::vector<double> elevation_deg;
  std::vector<double> range_km;

  double elevation(int user, int sat) const { return elevation_deg[index(user, sat)]; }
  double range(int user, int sat) const { return range_km[index(user, sat)]; }
  std::size_t index(int user, int sat) const {
    return static_cast<std::size_t>(user) * static_cast<std::size_t>(num_sats) + static_cast<std::size_t>(sat);
  }

  friend bool operator==(const GeometryTable&, const GeometryTable&) = default;
};

/// One admitted user-satellite link to evaluate.
struct LinkRequest {
  double elevation_deg = 90.0;
  double range_km = 0.0;
  double user_lat_deg = 0.0;
  double user_alt_km = 0.0;
  double bandwidth_ratio = 0.0;
  double arrival_rate_pps = 0.0;
  double packet_bits = 1.0;
  double max_delay_s = 1.0;
};

struct LinkResult {
  double snr = 0.0;
  double rate_bps = 0.0;
  double service_rate_pps = 0.0;
  double success_prob = 0.0;
  double served_bits = 0.0;

  friend bool operator==(const LinkResult&, const LinkResult&) = default;
};

/// Evaluates a single link: rate, M/M/1 service rate and delay-aware served bits.
LinkResult evaluate_link(const LinkRequest& req, const LinkBudgetParams& params, const RainModel& rain,
                         double slot_seconds);

namespace serial {

GeometryTable compute_geometry(const ConstellationConfig& config, std::span<const SatelliteState> sats,
                               std::span<const GeodeticPoint> users);

void evaluate_links(std::span<const LinkRequest> requests, std::span<LinkResult> results,
                    const LinkBudgetParams& params, const RainModel& rain, double slot_seconds);

}  // namespace serial

namespace omp {

GeometryTable compute_geometry(const ConstellationConfig& config, std::span<const SatelliteState> sats,
                               std::span<const GeodeticPoint> users);

void evaluate_links(std::span<const LinkRequest> requests, std::span<LinkResult> results,
                    const LinkBudgetParams& params, const RainModel& rain, double slot_seconds);

}  // namespace omp

}  // namespace satmig
