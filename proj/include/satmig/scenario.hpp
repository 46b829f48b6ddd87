#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "satmig/constellation.hpp"
#include "satmig/link_budget.hpp"
#include "satmig/traffic.hpp"

namespace satmig {

struct PenaltyWeights {
  double beam = 1.0;
  double bandwidth = 1.0;
  double compute = 1.0;
  double visibility = 1.0;

  friend bool operator==(const PenaltyWeights&, const PenaltyWeights&) = default;
};

struct EnvConfig {
  int num_slots = 60;
  double slot_seconds = 300.0;
  double theta_min_deg = 15.0;
  int max_beams = 16;
  double bandwidth_cap = 1.0;
  double compute_cap = 10.0;
  double penalty_weight = 0.2;
  PenaltyWeights penalty_weights;
  // Reported once per episode as deployment cost; never enters the reward.
  double app_update_cost = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// Everything needed to build an environment.
struct Scenario {
  std::string name;
  ConstellationConfig constellation;
  LinkBudgetParams link_budget;
  RainModel rain;
  EnvConfig env;
  std::vector<GroundCluster> clusters;
  std::vector<FlightPlan> flights;
  ProfileRanges profile_ranges;

  std::size_t max_users() const { return clusters.size() + flights.size(); }

  /// Checks every nested invariant; throws ConfigError naming the field.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace satmig
