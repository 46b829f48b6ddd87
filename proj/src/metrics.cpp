#include "satmig/metrics.hpp"

#include <algorithm>
#include <ostream>

#include "satmig/errors.hpp"

namespace satmig {

double EpisodeRecord::total_reward() const {
  double sum = 0.0;
  for (const auto& r : rows) sum += r.reward;
  return sum;
}

int EpisodeRecord::total_failures() const {
  int sum = 0;
  for (const auto& r : rows) sum += r.failures;
  return sum;
}

int EpisodeRecord::total_active() const {
  int sum = 0;
  for (const auto& r : rows) sum += r.active_users;
  return sum;
}

int EpisodeRecord::total_migrations() const {
  int sum = 0;
  for (const auto& r : rows) sum += r.migrations;
  return sum;
}

EpisodeRecorder::EpisodeRecorder(const Scenario& scenario, int episode, std::uint64_t seed, std::string policy)
    : num_clusters_(scenario.clusters.size()), num_slots_(scenario.env.num_slots) {
  record_.episode = episode;
  record_.seed = seed;
  record_.policy = std::move(policy);
}

void EpisodeRecorder::record(const SlotOutcome& outcome) {
  const double cumulative = (record_.rows.empty() ? 0.0 : record_.rows.back().cumulative_reward) + outcome.reward;
  record_.rows.push_back({record_.episode, outcome.slot, outcome.reward, cumulative, outcome.failures_count,
                          outcome.active_users, outcome.migrations_count, outcome.penalty_total});
  for (const auto& u : outcome.per_user) {
    if (!u.migrated) continue;
    if (static_cast<std::size_t>(u.user_id) < num_clusters_) ++record_.ground_migrations;
    else ++record_.flight_migrations;
  }
  const int interval = std::min(kMigrationIntervals - 1, outcome.slot * kMigrationIntervals / num_slots_);
  record_.interval_migrations[static_cast<std::size_t>(interval)] += outcome.migrations_count;
  record_.outcomes.push_back(outcome);
}

std::uint64_t policy_seed(std::uint64_t episode_seed) { return episode_seed ^ 0x9E3779B97F4A7C15ULL; }

EpisodeRecord run_episode(const Scenario& scenario, const Policy& policy, const std::string& policy_name,
                          std::uint64_t seed, int episode) {
  Environment env(scenario);
  GraphSnapshot obs = env.reset(seed);
  EpisodeRecorder recorder(scenario, episode, seed, policy_name);
  while (!env.done()) {
    StepResult r = env.step(policy(obs));
    recorder.record(r.outcome);
    obs = std::move(r.observation);
  }
  return recorder.take();
}

EpisodeRecord run_episode(const Scenario& scenario, const std::string& policy_name, std::uint64_t seed,
                          int episode) {
  if (policy_name == "external")
    throw ConfigError("policy: 'external' episodes are driven by a protocol client; use serve");
  const Policy policy =
      make_policy(policy_name, scenario.env, scenario.constellation.num_satellites, policy_seed(seed));
  return run_episode(scenario, policy, policy_name, seed, episode);
}

std::vector<EpisodeRecord> run_batch(const Scenario& scenario, const std::string& policy_name, int episodes,
                                     std::uint64_t seed) {
  // Surface a bad policy name here rather than inside the parallel region.
  if (policy_name == "external")
    throw ConfigError("policy: 'external' episodes are driven by a protocol client; use serve");
  (void)make_policy(policy_name, scenario.env, scenario.constellation.num_satellites, 0);
  std::vector<EpisodeRecord> records(static_cast<std::size_t>(std::max(episodes, 0)));
#pragma omp parallel for schedule(dynamic, 1)
  for (int e = 0; e < episodes; ++e)
    records[static_cast<std::size_t>(e)] = run_episode(scenario, policy_name, seed + static_cast<std::uint64_t>(e), e);
  return records;
}

RunSummary summarize(const std::vector<EpisodeRecord>& records, const Scenario& scenario) {
  RunSummary s;
  s.episodes = static_cast<int>(records.size());
  if (!records.empty()) s.policy = records.front().policy;
  int ground = 0, flight = 0;
  for (const auto& r : records) {
    for (const auto& row : r.rows) {
      s.total_reward += row.reward;
      s.total_failures += row.failures;
      s.total_active_user_slots += row.active_users;
      s.total_migrations += row.migrations;
      s.total_penalty += row.penalty;
    }
    ground += r.ground_migrations;
    flight += r.flight_migrations;
    for (std::size_t i = 0; i < s.migrations_per_interval.size(); ++i)
      s.migrations_per_interval[i] += r.interval_migrations[i];
  }
  if (s.episodes > 0) {
    const double n = s.episodes;
    s.mean_episode_reward = s.total_reward / n;
    s.mean_episode_migrations = s.total_migrations / n;
    if (!scenario.clusters.empty())
      s.avg_migrations_ground_user = ground / (n * static_cast<double>(scenario.clusters.size()));
    if (!scenario.flights.empty())
      s.avg_migrations_flight_user = flight / (n * static_cast<double>(scenario.flights.size()));
    s.deployment_cost = scenario.env.app_update_cost * n;
  }
  s.failure_rate = s.total_active_user_slots > 0
                       ? static_cast<double>(s.total_failures) / static_cast<double>(s.total_active_user_slots)
                       : 0.0;
  return s;
}

std::string metrics_csv_header() {
  return "episode,slot,reward,cumulative_reward,failures,active_users,migrations,penalty";
}

void write_metrics_csv(std::ostream& out, const std::vector<EpisodeRecord>& records) {
  out << metrics_csv_header() << '\n';
  const auto old_precision = out.precision(17);
  for (const auto& r : records)
    for (const auto& row : r.rows)
      out << row.episode << ',' << row.slot << ',' << row.reward << ',' << row.cumulative_reward << ','
          << row.failures << ',' << row.active_users << ',' << row.migrations << ',' << row.penalty << '\n';
  out.precision(old_precision);
}

nlohmann::json summary_to_json(const RunSummary& s) {
  return {{"policy", s.policy},
          {"episodes", s.episodes},
          {"total_reward", s.total_reward},
          {"mean_episode_reward", s.mean_episode_reward},
          {"total_failures", s.total_failures},
          {"active_user_slots", s.total_active_user_slots},
          {"failure_rate", s.failure_rate},
          {"total_migrations", s.total_migrations},
          {"mean_episode_migrations", s.mean_episode_migrations},
          {"avg_migrations_per_ground_user", s.avg_migrations_ground_user},
          {"avg_migrations_per_flight_user", s.avg_migrations_flight_user},
          {"migrations_per_interval", s.migrations_per_interval},
          {"total_penalty", s.total_penalty},
          {"deployment_cost", s.deployment_cost}};
}

}  // namespace satmig
