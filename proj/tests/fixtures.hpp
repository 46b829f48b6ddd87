#pragma once

// Small hand-built scenarios for environment tests.

#include "satmig/scenario.hpp"

namespace fixture {

inline satmig::ProfileRange fixed(double v) { return {v, v}; }

/// Equatorial constellation of `sats` satellites in one plane, `spacing_deg`
/// apart in phase, and one ground cluster per entry of `lons` on the equator.
/// Every profile field is pinned so that results are easy to predict.
inline satmig::Scenario equatorial(int sats, double spacing_deg, std::vector<double> lons) {
  satmig::Scenario sc;
  sc.name = "fixture";
  sc.constellation.num_satellites = sats;
  sc.constellation.inclination_deg = 0.0;
  sc.constellation.raan_spacing_deg = 0.0;
  sc.constellation.phasing_factor = spacing_deg * sats / 360.0;
  sc.env.num_slots = 4;
  sc.env.max_beams = 4;
  sc.env.penalty_weight = 0.5;
  sc.env.penalty_weights = {2.0, 3.0, 4.0, 5.0};
  for (std::size_t i = 0; i < lons.size(); ++i)
    sc.clusters.push_back({"c" + std::to_string(i), {0.0, lons[i], 0.0}, 1e6, {}});
  auto& g = sc.profile_ranges.ground;
  sc.profile_ranges.lambda0_pps = 2.0;
  g.packet_bits = fixed(1e4);
  g.max_delay_s = fixed(1.0);
  g.min_compute = fixed(0.0);
  g.migration_cost_weight = fixed(3.0);
  g.service_utility_weight = fixed(1e-9);
  return sc;
}

}  // namespace fixture
