#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "satmig/constellation.hpp"

namespace satmig {

enum class UserKind { ground, flight };

const char* to_string(UserKind kind);

/// Per-user service six-tuple plus identity.
struct UserProfile {
  int user_id = 0;
  UserKind kind = UserKind::ground;
  double packet_bits = 1e6;
  double max_delay_s = 0.1;
  double min_compute = 0.0;
  double arrival_rate_pps = 0.0;
  double migration_cost_weight = 0.0;
  double service_utility_weight = 1e-9;

  void validate() const;
  friend bool operator==(const UserProfile&, const UserProfile&) = default;
};

struct GroundCluster {
  std::string name;
  GeodeticPoint location;
  double population = 0.0;
  UserProfile profile;

  friend bool operator==(const GroundCluster&, const GroundCluster&) = default;
};

struct Waypoint {
  double time_s = 0.0;
  GeodeticPoint point;

  friend bool operator==(const Waypoint&, const Waypoint&) = default;
};

struct FlightPlan {
  int flight_id = 0;
  std::string name;
  std::vector<Waypoint> waypoints;
  double cruise_floor_km = 8.0;
  double climb_rate_threshold_km_s = 0.002;
  UserProfile profile;

  double start_time() const { return waypoints.front().time_s; }
  double end_time() const { return waypoints.back().time_s; }

  friend bool operator==(const FlightPlan&, const FlightPlan&) = default;
};

/// Sampling bounds for one user kind. Each field is a closed [lo, hi] interval.
struct ProfileRange {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const ProfileRange&, const ProfileRange&) = default;
};

struct KindRanges {
  ProfileRange packet_bits{1e6, 1e6};
  ProfileRange max_delay_s{0.1, 0.1};
  ProfileRange min_compute{0.0, 0.0};
  ProfileRange migration_cost_weight{1.0, 1.0};
  ProfileRange service_utility_weight{1e-9, 1e-9};
  // Flights only; ground arrival rates come from population.
  ProfileRange arrival_rate_pps{1.0, 1.0};

  friend bool operator==(const KindRanges&, const KindRanges&) = default;
};

struct ProfileRanges {
  double lambda0_pps = 10.0;
  KindRanges ground;
  KindRanges flight;

  friend bool operator==(const ProfileRanges&, const ProfileRanges&) = default;
};

/// lambda0 * population / mean_population.
double arrival_rate(double population, double mean_population, double lambda0);

/// Piecewise-linear position; longitude follows the shorter arc across +-180.
/// std::nullopt outside the flight window.
std::optional<GeodeticPoint> position_at(const FlightPlan& flight, double t_s);

/// Altitude at or above the cruise floor and vertical rate on the enclosing
/// segment within the threshold.
bool is_cruising(const FlightPlan& flight, double t_s);

struct ActiveUser {
  UserProfile profile;
  GeodeticPoint position;
};

/// Ground clusters always, flights iff cruising at the slot midpoint. Ordered by user id.
std::vector<ActiveUser> active_users(std::span<const GroundCluster> clusters, std::span<const FlightPlan> flights,
                                     int slot, double slot_seconds);

/// Fills every cluster and flight profile from `ranges`, deterministically per seed.
/// Ground clusters get user ids 0..C-1, flights C..C+F-1.
void assign_profiles(std::span<GroundCluster> clusters, std::span<FlightPlan> flights, const ProfileRanges& ranges,
                     std::uint64_t seed);

}  // namespace satmig
