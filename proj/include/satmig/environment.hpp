#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "satmig/kernels.hpp"
#include "satmig/scenario.hpp"

namespace satmig {

struct SatelliteNode {
  int sat_id = 0;
  Vec3 position_ecef_km;
  double remaining_bandwidth_ratio = 1.0;
  double remaining_compute_ratio = 1.0;
  int remaining_beam_slots = 0;

  friend bool operator==(const SatelliteNode&, const SatelliteNode&) = default;
};

struct UserNode {
  int user_id = 0;
  UserKind kind = UserKind::ground;
  GeodeticPoint position;
  double priority = 0.0;  // service utility weight
  double arrival_rate_pps = 0.0;
  double min_compute = 0.0;
  std::optional<int> previous_satellite;

  friend bool operator==(const UserNode&, const UserNode&) = default;
};

/// A visible user-satellite pair.
struct Edge {
  int user_id = 0;
  int sat_id = 0;
  double elevation_deg = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Raw per-slot observation. Satellite remaining capacities reflect the
/// allocations executed in the previous slot.
struct GraphSnapshot {
  int slot = 0;
  std::vector<SatelliteNode> satellite_nodes;
  std::vector<UserNode> user_nodes;  // ordered by user id
  std::vector<Edge> edges;           // ordered by (user, satellite)

  const UserNode* find_user(int user_id) const;
  bool is_visible(int user_id, int sat_id) const;

  friend bool operator==(const GraphSnapshot&, const GraphSnapshot&) = default;
};

struct UserAction {
  int user_id = 0;
  int satellite = 0;
  double bandwidth = 1.0;
  double compute = 1.0;

  friend bool operator==(const UserAction&, const UserAction&) = default;
};

/// One action per active user, in snapshot user order.
struct ActionSet {
  std::vector<UserAction> actions;

  friend bool operator==(const ActionSet&, const ActionSet&) = default;
};

enum class FailureReason { none, invisible, beam_evicted, compute, unstable };

const char* to_string(FailureReason reason);

struct UserOutcome {
  int user_id = 0;
  int chosen_sat = 0;
  std::optional<int> assigned_sat;  // executed assignment, if admitted
  double served_bits = 0.0;
  int migrated = 0;
  bool failed = false;
  FailureReason reason = FailureReason::none;
  double effective_bandwidth = 0.0;
  double effective_compute = 0.0;
  double effective_rate_bps = 0.0;
  double service_utility_weight = 0.0;
  double migration_cost_weight = 0.0;

  friend bool operator==(const UserOutcome&, const UserOutcome&) = default;
};

struct SlotOutcome {
  int slot = 0;
  double reward = 0.0;
  double utility = 0.0;         // sum of weight * served bits
  double migration_cost = 0.0;  // sum of weight * migrated
  double penalty_total = 0.0;
  int migrations_count = 0;
  int failures_count = 0;
  int active_users = 0;
  std::vector<UserOutcome> per_user;

  friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

enum class ConstraintKind { assignment, beam, bandwidth, compute, min_compute, visibility };

const char* to_string(ConstraintKind kind);

/// One breached constraint. `index` is a satellite id for the per-satellite
/// capacity constraints and a user id otherwise.
struct Violation {
  ConstraintKind kind = ConstraintKind::beam;
  int index = 0;

  friend auto operator<=>(const Violation&, const Violation&) = default;
};

/// Per-term breakdown of the constraint penalty for a submitted action set.
/// The minimum-compute requirement is reported as a violation but is enforced
/// as a service failure, not a penalty term.
struct ConstraintReport {
  double penalty = 0.0;
  double beam_excess = 0.0;
  double bandwidth_excess = 0.0;
  double compute_excess = 0.0;
  int invisible_count = 0;
  std::vector<bool> infeasible;  // parallel to ActionSet::actions
  std::vector<Violation> violations;  // sorted
};

/// Migration flag per user: set iff both assignments exist and differ.
/// A first placement (no previous assignment) is not a migration.
int migration_indicator(std::optional<int> previous, std::optional<int> current);
std::vector<int> migration_indicator(const std::vector<std::optional<int>>& previous,
                                     const std::vector<std::optional<int>>& current);

ConstraintReport constraint_penalty(const ActionSet& actions, const GraphSnapshot& snapshot, const EnvConfig& config,
                                    int num_satellites);

struct StepResult {
  GraphSnapshot observation;
  SlotOutcome outcome;
  bool done = false;
};

/// Slot-stepped decision process over one scenario. Not thread-safe; use one
/// instance per thread.
class Environment {
 public:
  explicit Environment(Scenario scenario);

  GraphSnapshot reset(std::uint64_t seed);
  StepResult step(const ActionSet& actions);

  bool done() const { return slot_ >= scenario_.env.num_slots; }
  bool started() const { return started_; }
  int slot() const { return slot_; }
  const GraphSnapshot& observation() const { return snapshot_; }
  const Scenario& scenario() const { return scenario_; }
  const GeometryTable& geometry() const { return geometry_; }

  /// Profiles sampled at the last reset, indexed by user id.
  const std::vector<UserProfile>& profiles() const { return profiles_; }
  double deployment_cost() const { return scenario_.env.app_update_cost; }

 private:
  GraphSnapshot build_snapshot();

  Scenario scenario_;
  std::vector<GroundCluster> clusters_;
  std::vector<FlightPlan> flights_;
  std::vector<UserProfile> profiles_;
  std::vector<ActiveUser> active_;
  GeometryTable geometry_;
  GraphSnapshot snapshot_;
  std::map<int, int> previous_;  // user id -> executed satellite
  std::vector<double> used_bandwidth_;
  std::vector<double> used_compute_;
  std::vector<int> used_beams_;
  int slot_ = 0;
  bool started_ = false;
};

}  // namespace satmig
