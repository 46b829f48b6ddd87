#include "satmig/environment.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "satmig/allocation.hpp"
#include "satmig/errors.hpp"
#include "satmig/queueing.hpp"

namespace satmig {

const char* to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::none: return "none";
    case FailureReason::invisible: return "invisible";
    case FailureReason::beam_evicted: return "beam_evicted";
    case FailureReason::compute: return "compute";
    case FailureReason::unstable: return "unstable";
  }
  return "unknown";
}

const char* to_string(ConstraintKind kind) {
  switch (kind) {
    case ConstraintKind::assignment: return "assignment";
    case ConstraintKind::beam: return "beam";
    case ConstraintKind::bandwidth: return "bandwidth";
    case ConstraintKind::compute: return "compute";
    case ConstraintKind::min_compute: return "min_compute";
    case ConstraintKind::visibility: return "visibility";
  }
  return "unknown";
}

void EnvConfig::validate() const {
  if (num_slots < 1) throw ConfigError("env.num_slots: must be >= 1");
  if (!(slot_seconds > 0.0)) throw ConfigError("env.slot_seconds: must be > 0");
  if (!(theta_min_deg >= 0.0 && theta_min_deg < 90.0)) throw ConfigError("env.theta_min_deg: must lie in [0, 90)");
  if (max_beams < 1) throw ConfigError("env.max_beams: must be >= 1");
  if (!(bandwidth_cap > 0.0)) throw ConfigError("env.bandwidth_cap: must be > 0");
  if (!(compute_cap > 0.0)) throw ConfigError("env.compute_cap: must be > 0");
  if (!(penalty_weight >= 0.0)) throw ConfigError("env.penalty_weight: must be >= 0");
  if (!(penalty_weights.beam >= 0.0)) throw ConfigError("env.penalty_weights.beam: must be >= 0");
  if (!(penalty_weights.bandwidth >= 0.0)) throw ConfigError("env.penalty_weights.bandwidth: must be >= 0");
  if (!(penalty_weights.compute >= 0.0)) throw ConfigError("env.penalty_weights.compute: must be >= 0");
  if (!(penalty_weights.visibility >= 0.0)) throw ConfigError("env.penalty_weights.visibility: must be >= 0");
  if (!(app_update_cost >= 0.0)) throw ConfigError("env.app_update_cost: must be >= 0");
}

namespace {

void validate_range(const ProfileRange& r, const std::string& field, bool allow_zero) {
  if (!(r.lo <= r.hi)) throw ConfigError(field + ": lower bound exceeds upper bound");
  if (allow_zero ? !(r.lo >= 0.0) : !(r.lo > 0.0))
    throw ConfigError(field + (allow_zero ? ": must be >= 0" : ": must be > 0"));
}

void validate_kind(const KindRanges& k, const std::string& prefix) {
  validate_range(k.packet_bits, prefix + ".packet_bits", false);
  validate_range(k.max_delay_s, prefix + ".max_delay_s", false);
  validate_range(k.min_compute, prefix + ".min_compute", true);
  validate_range(k.migration_cost_weight, prefix + ".migration_cost_weight", true);
  validate_range(k.service_utility_weight, prefix + ".service_utility_weight", false);
  validate_range(k.arrival_rate_pps, prefix + ".arrival_rate_pps", true);
}

void validate_point(const GeodeticPoint& p, const std::string& where) {
  if (!(p.lat_deg >= -90.0 && p.lat_deg <= 90.0)) throw ConfigError(where + ".lat_deg: must lie in [-90, 90]");
  if (!(p.lon_deg > -180.0 && p.lon_deg <= 180.0)) throw ConfigError(where + ".lon_deg: must lie in (-180, 180]");
  if (!(p.alt_km >= 0.0)) throw ConfigError(where + ".alt_km: must be >= 0");
}

}  // namespace

void Scenario::validate() const {
  constellation.validate();
  link_budget.validate();
  rain.validate();
  env.validate();
  if (clusters.empty()) throw ConfigError("clusters: at least one cluster is required");
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const std::string where = "clusters[" + std::to_string(i) + "]";
    validate_point(clusters[i].location, where);
    if (!(clusters[i].population > 0.0)) throw ConfigError(where + ".population: must be > 0");
  }
  for (std::size_t i = 0; i < flights.size(); ++i) {
    const std::string where = "flights[" + std::to_string(i) + "]";
    const auto& wp = flights[i].waypoints;
    if (wp.size() < 2) throw ConfigError(where + ".waypoints: at least 2 waypoints are required");
    for (std::size_t j = 0; j < wp.size(); ++j) {
      validate_point(wp[j].point, where + ".waypoints[" + std::to_string(j) + "]");
      if (j > 0 && !(wp[j].time_s > wp[j - 1].time_s))
        throw ConfigError(where + ".waypoints[" + std::to_string(j) + "].t_s: times must be strictly increasing");
    }
    if (!(flights[i].cruise_floor_km >= 0.0)) throw ConfigError(where + ".cruise_floor_km: must be >= 0");
    if (!(flights[i].climb_rate_threshold_km_s >= 0.0))
      throw ConfigError(where + ".climb_rate_threshold_km_s: must be >= 0");
  }
  if (!(profile_ranges.lambda0_pps > 0.0)) throw ConfigError("profile_ranges.lambda0_pps: must be > 0");
  validate_kind(profile_ranges.ground, "profile_ranges.ground");
  validate_kind(profile_ranges.flight, "profile_ranges.flight");
}

const UserNode* GraphSnapshot::find_user(int user_id) const {
  auto it = std::lower_bound(user_nodes.begin(), user_nodes.end(), user_id,
                             [](const UserNode& n, int id) { return n.user_id < id; });
  return (it != user_nodes.end() && it->user_id == user_id) ? &*it : nullptr;
}

bool GraphSnapshot::is_visible(int user_id, int sat_id) const {
  return std::binary_search(edges.begin(), edges.end(), Edge{user_id, sat_id, 0.0},
                            [](const Edge& a, const Edge& b) {
                              return a.user_id != b.user_id ? a.user_id < b.user_id : a.sat_id < b.sat_id;
                            });
}

int migration_indicator(std::optional<int> previous, std::optional<int> current) {
  return (previous && current && *previous != *current) ? 1 : 0;
}

std::vector<int> migration_indicator(const std::vector<std::optional<int>>& previous,
                                     const std::vector<std::optional<int>>& current) {
  if (previous.size() != current.size()) throw std::invalid_argument("migration_indicator: size mismatch");
  std::vector<int> out(previous.size());
  for (std::size_t i = 0; i < previous.size(); ++i) out[i] = migration_indicator(previous[i], current[i]);
  return out;
}

ConstraintReport constraint_penalty(const ActionSet& actions, const GraphSnapshot& snapshot, const EnvConfig& config,
                                    int num_satellites) {
  const auto n_sat = static_cast<std::size_t>(std::max(num_satellites, 0));
  std::vector<int> beams(n_sat, 0);
  std::vector<double> bandwidth(n_sat, 0.0), compute(n_sat, 0.0);
  std::map<int, int> choices_per_user;

  ConstraintReport report;
  report.infeasible.assign(actions.actions.size(), false);
  std::set<Violation> violations;

  for (const auto& a : actions.actions) {
    ++choices_per_user[a.user_id];
    if (a.satellite < 0 || static_cast<std::size_t>(a.satellite) >= n_sat) continue;
    const auto s = static_cast<std::size_t>(a.satellite);
    ++beams[s];
    bandwidth[s] += a.bandwidth;
    compute[s] += a.compute;
  }
  for (const auto& u : snapshot.user_nodes) {
    auto it = choices_per_user.find(u.user_id);
    if (it == choices_per_user.end() || it->second != 1) violations.insert({ConstraintKind::assignment, u.user_id});
  }

  const double f_max = config.compute_cap;
  std::vector<bool> sat_violated(n_sat, false);
  for (std::size_t s = 0; s < n_sat; ++s) {
    const int id = static_cast<int>(s);
    if (beams[s] > config.max_beams) {
      report.beam_excess += beams[s] - config.max_beams;
      violations.insert({ConstraintKind::beam, id});
      sat_violated[s] = true;
    }
    if (bandwidth[s] > config.bandwidth_cap) {
      report.bandwidth_excess += bandwidth[s] - config.bandwidth_cap;
      violations.insert({ConstraintKind::bandwidth, id});
      sat_violated[s] = true;
    }
    if (compute[s] * f_max > f_max) {
      report.compute_excess += (compute[s] * f_max - f_max) / f_max;
      violations.insert({ConstraintKind::compute, id});
      sat_violated[s] = true;
    }
  }

  for (std::size_t i = 0; i < actions.actions.size(); ++i) {
    const auto& a = actions.actions[i];
    const bool in_range = a.satellite >= 0 && static_cast<std::size_t>(a.satellite) < n_sat;
    if (!in_range || !snapshot.is_visible(a.user_id, a.satellite)) {
      ++report.invisible_count;
      violations.insert({ConstraintKind::visibility, a.user_id});
      report.infeasible[i] = true;
    } else if (sat_violated[static_cast<std::size_t>(a.satellite)]) {
      report.infeasible[i] = true;
    }
    if (const UserNode* node = snapshot.find_user(a.user_id); node && a.compute * f_max < node->min_compute)
      violations.insert({ConstraintKind::min_compute, a.user_id});
  }

  const auto& w = config.penalty_weights;
  report.penalty = w.beam * report.beam_excess + w.bandwidth * report.bandwidth_excess +
                   w.compute * report.compute_excess + w.visibility * report.invisible_count;
  report.violations.assign(violations.begin(), violations.end());
  return report;
}

Environment::Environment(Scenario scenario) : scenario_(std::move(scenario)) { scenario_.validate(); }

GraphSnapshot Environment::reset(std::uint64_t seed) {
  clusters_ = scenario_.clusters;
  flights_ = scenario_.flights;
  assign_profiles(clusters_, flights_, scenario_.profile_ranges, seed);

  profiles_.clear();
  for (const auto& c : clusters_) profiles_.push_back(c.profile);
  for (const auto& f : flights_) profiles_.push_back(f.profile);

  const auto n_sat = static_cast<std::size_t>(scenario_.constellation.num_satellites);
  used_bandwidth_.assign(n_sat, 0.0);
  used_compute_.assign(n_sat, 0.0);
  used_beams_.assign(n_sat, 0);
  previous_.clear();
  slot_ = 0;
  started_ = true;
  snapshot_ = build_snapshot();
  return snapshot_;
}

GraphSnapshot Environment::build_snapshot() {
  const auto& cfg = scenario_.constellation;
  const auto& env = scenario_.env;
  const auto sats = propagate(cfg, slot_, env.slot_seconds);
  active_ = active_users(clusters_, flights_, slot_, env.slot_seconds);

  std::vector<GeodeticPoint> positions;
  positions.reserve(active_.size());
  for (const auto& u : active_) positions.push_back(u.position);
  geometry_ = omp::compute_geometry(cfg, sats, positions);

  GraphSnapshot snap;
  snap.slot = slot_;
  for (const auto& s : sats) {
    const auto k = static_cast<std::size_t>(s.sat_id);
    snap.satellite_nodes.push_back({s.sat_id, s.position_ecef_km,
                                    std::max(0.0, 1.0 - used_bandwidth_[k] / env.bandwidth_cap),
                                    std::max(0.0, 1.0 - used_compute_[k]),
                                    std::max(0, env.max_beams - used_beams_[k])});
  }
  for (std::size_t i = 0; i < active_.size(); ++i) {
    const auto& p = active_[i].profile;
    UserNode node{p.user_id, p.kind, active_[i].position, p.service_utility_weight, p.arrival_rate_pps,
                  p.min_compute, std::nullopt};
    if (auto it = previous_.find(p.user_id); it != previous_.end()) node.previous_satellite = it->second;
    snap.user_nodes.push_back(node);
    for (int s = 0; s < geometry_.num_sats; ++s) {
      const double elev = geometry_.elevation(static_cast<int>(i), s);
      if (elev >= env.theta_min_deg) snap.edges.push_back({p.user_id, s, elev});
    }
  }
  return snap;
}

StepResult Environment::step(const ActionSet& actions) {
  if (!started_) throw StateError("not_reset", "step called before reset");
  if (done()) throw StateError("episode_done", "episode already finished; call reset");

  const auto& cfg = scenario_.env;
  const int n_sat = scenario_.constellation.num_satellites;
  const std::size_t n_users = active_.size();

  if (actions.actions.size() != n_users)
    throw ProtocolError("action_count", "expected " + std::to_string(n_users) + " actions, got " +
                                            std::to_string(actions.actions.size()));

  // Actions indexed in active-user order.
  std::vector<const UserAction*> by_user(n_users, nullptr);
  for (const auto& a : actions.actions) {
    auto it = std::lower_bound(active_.begin(), active_.end(), a.user_id,
                               [](const ActiveUser& u, int id) { return u.profile.user_id < id; });
    if (it == active_.end() || it->profile.user_id != a.user_id)
      throw ProtocolError("unknown_user", "user " + std::to_string(a.user_id) + " is not active");
    const auto idx = static_cast<std::size_t>(std::distance(active_.begin(), it));
    if (by_user[idx]) throw ProtocolError("duplicate_user", "duplicate action for user " + std::to_string(a.user_id));
    if (a.satellite < 0 || a.satellite >= n_sat)
      throw ProtocolError("invalid_action", "satellite index out of range for user " + std::to_string(a.user_id));
    if (!(a.bandwidth > 0.0 && a.bandwidth <= 1.0) || !(a.compute > 0.0 && a.compute <= 1.0))
      throw ProtocolError("invalid_action", "ratios must lie in (0, 1] for user " + std::to_string(a.user_id));
    by_user[idx] = &a;
  }

  const ConstraintReport report = constraint_penalty(actions, snapshot_, cfg, n_sat);

  SlotOutcome out;
  out.slot = slot_;
  out.active_users = static_cast<int>(n_users);
  out.penalty_total = report.penalty;
  out.per_user.resize(n_users);

  // Visibility, then beam admission by priority (ties to the lower user id).
  std::vector<std::vector<std::size_t>> choosers(static_cast<std::size_t>(n_sat));
  for (std::size_t i = 0; i < n_users; ++i) {
    const auto& a = *by_user[i];
    const auto& p = active_[i].profile;
    auto& uo = out.per_user[i];
    uo.user_id = p.user_id;
    uo.chosen_sat = a.satellite;
    uo.service_utility_weight = p.service_utility_weight;
    uo.migration_cost_weight = p.migration_cost_weight;
    if (geometry_.elevation(static_cast<int>(i), a.satellite) >= cfg.theta_min_deg) {
      choosers[static_cast<std::size_t>(a.satellite)].push_back(i);
    } else {
      uo.failed = true;
      uo.reason = FailureReason::invisible;
    }
  }
  for (auto& list : choosers) {
    if (static_cast<int>(list.size()) <= cfg.max_beams) continue;
    std::sort(list.begin(), list.end(), [&](std::size_t x, std::size_t y) {
      const auto& px = active_[x].profile;
      const auto& py = active_[y].profile;
      if (px.service_utility_weight != py.service_utility_weight)
        return px.service_utility_weight > py.service_utility_weight;
      return px.user_id < py.user_id;
    });
    for (std::size_t k = static_cast<std::size_t>(cfg.max_beams); k < list.size(); ++k) {
      out.per_user[list[k]].failed = true;
      out.per_user[list[k]].reason = FailureReason::beam_evicted;
    }
    list.resize(static_cast<std::size_t>(cfg.max_beams));
    std::sort(list.begin(), list.end());
  }

  // Admitted users share the caps; oversubscription is throttled proportionally.
  std::fill(used_bandwidth_.begin(), used_bandwidth_.end(), 0.0);
  std::fill(used_compute_.begin(), used_compute_.end(), 0.0);
  std::fill(used_beams_.begin(), used_beams_.end(), 0);
  std::vector<LinkRequest> requests;
  std::vector<std::size_t> request_owner;
  for (std::size_t s = 0; s < choosers.size(); ++s) {
    std::vector<double*> b_ptrs, f_ptrs;
    for (std::size_t i : choosers[s]) {
      auto& uo = out.per_user[i];
      uo.assigned_sat = static_cast<int>(s);
      uo.effective_bandwidth = by_user[i]->bandwidth;
      uo.effective_compute = by_user[i]->compute;
      b_ptrs.push_back(&uo.effective_bandwidth);
      f_ptrs.push_back(&uo.effective_compute);
    }
    fit_to_cap(b_ptrs, cfg.bandwidth_cap);
    fit_to_cap(f_ptrs, 1.0);
    for (std::size_t i : choosers[s]) {
      auto& uo = out.per_user[i];
      const auto& p = active_[i].profile;
      used_bandwidth_[s] += uo.effective_bandwidth;
      used_compute_[s] += uo.effective_compute;
      ++used_beams_[s];
      if (uo.effective_compute * cfg.compute_cap < p.min_compute) {
        uo.failed = true;
        uo.reason = FailureReason::compute;
        continue;
      }
      const int ui = static_cast<int>(i);
      requests.push_back({geometry_.elevation(ui, static_cast<int>(s)), geometry_.range(ui, static_cast<int>(s)),
                          active_[i].position.lat_deg, active_[i].position.alt_km, uo.effective_bandwidth,
                          p.arrival_rate_pps, p.packet_bits, p.max_delay_s});
      request_owner.push_back(i);
    }
  }

  std::vector<LinkResult> links(requests.size());
  omp::evaluate_links(requests, links, scenario_.link_budget, scenario_.rain, cfg.slot_seconds);
  for (std::size_t k = 0; k < links.size(); ++k) {
    auto& uo = out.per_user[request_owner[k]];
    const auto& p = active_[request_owner[k]].profile;
    uo.effective_rate_bps = links[k].rate_bps;
    if (!make_queue(p.arrival_rate_pps, links[k].service_rate_pps).stable()) {
      uo.failed = true;
      uo.reason = FailureReason::unstable;
      continue;
    }
    uo.served_bits = links[k].served_bits;
  }

  // Migrations on executed assignments, then the reward in user order.
  for (std::size_t i = 0; i < n_users; ++i) {
    auto& uo = out.per_user[i];
    std::optional<int> prev;
    if (auto it = previous_.find(uo.user_id); it != previous_.end()) prev = it->second;
    uo.migrated = migration_indicator(prev, uo.assigned_sat);
    if (uo.assigned_sat) previous_[uo.user_id] = *uo.assigned_sat;
  }
  for (const auto& uo : out.per_user) {
    out.utility += uo.service_utility_weight * uo.served_bits;
    out.migration_cost += uo.migration_cost_weight * uo.migrated;
    out.migrations_count += uo.migrated;
    out.failures_count += uo.failed ? 1 : 0;
  }
  out.reward = out.utility - cfg.penalty_weight * (out.migration_cost + out.penalty_total);

  ++slot_;
  snapshot_ = build_snapshot();
  return {snapshot_, std::move(out), done()};
}

}  // namespace satmig
