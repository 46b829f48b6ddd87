#include "satmig/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "satmig/errors.hpp"

namespace satmig {

const char* to_string(UserKind kind) { return kind == UserKind::ground ? "ground" : "flight"; }

void UserProfile::validate() const {
  const std::string where = "user " + std::to_string(user_id) + ".";
  if (!(packet_bits > 0.0)) throw ConfigError(where + "packet_bits: must be > 0");
  if (!(max_delay_s > 0.0)) throw ConfigError(where + "max_delay_s: must be > 0");
  if (!(min_compute >= 0.0)) throw ConfigError(where + "min_compute: must be >= 0");
  if (!(arrival_rate_pps >= 0.0)) throw ConfigError(where + "arrival_rate_pps: must be >= 0");
  if (!(migration_cost_weight >= 0.0)) throw ConfigError(where + "migration_cost_weight: must be >= 0");
  if (!(service_utility_weight > 0.0)) throw ConfigError(where + "service_utility_weight: must be > 0");
}

double arrival_rate(double population, double mean_population, double lambda0) {
  return lambda0 * population / mean_population;
}

namespace {

double wrap_lon(double lon) {
  double w = std::fmod(lon + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  w -= 180.0;
  return w == -180.0 ? 180.0 : w;
}

// Index i such that t lies in [wp[i].time, wp[i+1].time]; the last segment
// owns the final waypoint.
std::optional<std::size_t> segment_index(const FlightPlan& flight, double t_s) {
  const auto& wp = flight.waypoints;
  if (wp.size() < 2 || t_s < wp.front().time_s || t_s > wp.back().time_s) return std::nullopt;
  auto it = std::upper_bound(wp.begin(), wp.end(), t_s, [](double t, const Waypoint& w) { return t < w.time_s; });
  std::size_t i = static_cast<std::size_t>(std::distance(wp.begin(), it));
  i = std::min(i, wp.size() - 1);
  return i - 1;
}

}  // namespace

std::optional<GeodeticPoint> position_at(const FlightPlan& flight, double t_s) {
  const auto seg = segment_index(flight, t_s);
  if (!seg) return std::nullopt;
  const Waypoint& a = flight.waypoints[*seg];
  const Waypoint& b = flight.waypoints[*seg + 1];
  const double w = (t_s - a.time_s) / (b.time_s - a.time_s);
  if (w == 0.0) return a.point;
  if (w == 1.0) return b.point;

  double dlon = b.point.lon_deg - a.point.lon_deg;
  if (dlon > 180.0) dlon -= 360.0;
  if (dlon < -180.0) dlon += 360.0;
  return GeodeticPoint{a.point.lat_deg + w * (b.point.lat_deg - a.point.lat_deg),
                       wrap_lon(a.point.lon_deg + w * dlon),
                       a.point.alt_km + w * (b.point.alt_km - a.point.alt_km)};
}

bool is_cruising(const FlightPlan& flight, double t_s) {
  const auto seg = segment_index(flight, t_s);
  if (!seg) return false;
  const Waypoint& a = flight.waypoints[*seg];
  const Waypoint& b = flight.waypoints[*seg + 1];
  const double rate = (b.point.alt_km - a.point.alt_km) / (b.time_s - a.time_s);
  const auto pos = position_at(flight, t_s);
  return pos->alt_km >= flight.cruise_floor_km && std::abs(rate) <= flight.climb_rate_threshold_km_s;
}

std::vector<ActiveUser> active_users(std::span<const GroundCluster> clusters, std::span<const FlightPlan> flights,
                                     int slot, double slot_seconds) {
  std::vector<ActiveUser> out;
  out.reserve(clusters.size() + flights.size());
  for (const auto& c : clusters) out.push_back({c.profile, c.location});
  const double t_mid = (slot + 0.5) * slot_seconds;
  for (const auto& f : flights) {
    if (!is_cruising(f, t_mid)) continue;
    out.push_back({f.profile, *position_at(f, t_mid)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ActiveUser& a, const ActiveUser& b) { return a.profile.user_id < b.profile.user_id; });
  return out;
}

void assign_profiles(std::span<GroundCluster> clusters, std::span<FlightPlan> flights, const ProfileRanges& ranges,
                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto draw = [&rng](const ProfileRange& r) {
    if (r.hi <= r.lo) return r.lo;
    return std::uniform_real_distribution<double>(r.lo, r.hi)(rng);
  };
  auto fill = [&](UserProfile& p, const KindRanges& k) {
    p.packet_bits = draw(k.packet_bits);
    p.max_delay_s = draw(k.max_delay_s);
    p.min_compute = draw(k.min_compute);
    p.migration_cost_weight = draw(k.migration_cost_weight);
    p.service_utility_weight = draw(k.service_utility_weight);
  };

  double mean_pop = 0.0;
  for (const auto& c : clusters) mean_pop += c.population;
  if (!clusters.empty()) mean_pop /= static_cast<double>(clusters.size());

  int next_id = 0;
  for (auto& c : clusters) {
    c.profile.user_id = next_id++;
    c.profile.kind = UserKind::ground;
    fill(c.profile, ranges.ground);
    c.profile.arrival_rate_pps = arrival_rate(c.population, mean_pop, ranges.lambda0_pps);
  }
  for (auto& f : flights) {
    f.profile.user_id = next_id++;
    f.profile.kind = UserKind::flight;
    fill(f.profile, ranges.flight);
    f.profile.arrival_rate_pps = draw(ranges.flight.arrival_rate_pps);
  }
}

}  // namespace satmig
