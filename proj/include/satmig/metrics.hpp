#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "satmig/environment.hpp"
#include "satmig/policies.hpp"

namespace satmig {

inline constexpr int kMigrationIntervals = 6;

/// One CSV row per slot. Column order is fixed; see metrics_csv_header().
struct MetricsRow {
  int episode = 0;
  int slot = 0;
  double reward = 0.0;
  double cumulative_reward = 0.0;
  int failures = 0;
  int active_users = 0;
  int migrations = 0;
  double penalty = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct EpisodeRecord {
  int episode = 0;
  std::uint64_t seed = 0;
  std::string policy;
  std::vector<SlotOutcome> outcomes;
  std::vector<MetricsRow> rows;
  int ground_migrations = 0;
  int flight_migrations = 0;
  std::array<int, kMigrationIntervals> interval_migrations{};

  double total_reward() const;
  int total_failures() const;
  int total_active() const;
  int total_migrations() const;
};

/// Accumulates SlotOutcomes into an EpisodeRecord.
class EpisodeRecorder {
 public:
  EpisodeRecorder(const Scenario& scenario, int episode, std::uint64_t seed, std::string policy);
  void record(const SlotOutcome& outcome);
  const EpisodeRecord& record() const { return record_; }
  EpisodeRecord take() { return std::move(record_); }

 private:
  EpisodeRecord record_;
  std::size_t num_clusters_;
  int num_slots_;
};

EpisodeRecord run_episode(const Scenario& scenario, const std::string& policy_name, std::uint64_t seed,
                          int episode = 0);
EpisodeRecord run_episode(const Scenario& scenario, const Policy& policy, const std::string& policy_name,
                          std::uint64_t seed, int episode = 0);

/// Episodes seed, seed+1, ... run in parallel, one environment each.
/// The result is ordered by episode and independent of the thread count.
std::vector<EpisodeRecord> run_batch(const Scenario& scenario, const std::string& policy_name, int episodes,
                                     std::uint64_t seed);

/// Seed used by a policy's private RNG for a given episode seed.
std::uint64_t policy_seed(std::uint64_t episode_seed);

struct RunSummary {
  std::string policy;
  int episodes = 0;
  double total_reward = 0.0;
  double mean_episode_reward = 0.0;
  int total_failures = 0;
  int total_active_user_slots = 0;
  double failure_rate = 0.0;
  int total_migrations = 0;
  double mean_episode_migrations = 0.0;
  double avg_migrations_ground_user = 0.0;
  double avg_migrations_flight_user = 0.0;
  std::array<int, kMigrationIntervals> migrations_per_interval{};
  double deployment_cost = 0.0;
  double total_penalty = 0.0;
};

RunSummary summarize(const std::vector<EpisodeRecord>& records, const Scenario& scenario);

std::string metrics_csv_header();
void write_metrics_csv(std::ostream& out, const std::vector<EpisodeRecord>& records);
nlohmann::json summary_to_json(const RunSummary& summary);

}  // namespace satmig
