#include "satmig/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numeric>

#include "satmig/allocation.hpp"
#include "satmig/errors.hpp"

namespace satmig {

namespace {

double unit_open_closed(std::mt19937_64& rng) {
  return 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace

ActionSet random_policy(const GraphSnapshot& snapshot, std::mt19937_64& rng, const EnvConfig& config,
                        int num_satellites) {
  ActionSet set;
  std::vector<int> candidates;
  for (const auto& u : snapshot.user_nodes) {
    candidates.clear();
    for (const auto& e : snapshot.edges)
      if (e.user_id == u.user_id) candidates.push_back(e.sat_id);
    int sat = 0;
    if (!candidates.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      sat = candidates[pick(rng)];
    } else {
      sat = std::uniform_int_distribution<int>(0, num_satellites - 1)(rng);
    }
    const double b = unit_open_closed(rng);
    const double f = unit_open_closed(rng);
    set.actions.push_back({u.user_id, sat, b, f});
  }

  std::vector<std::vector<double*>> bandwidth(static_cast<std::size_t>(num_satellites));
  std::vector<std::vector<double*>> compute(static_cast<std::size_t>(num_satellites));
  for (auto& a : set.actions) {
    bandwidth[static_cast<std::size_t>(a.satellite)].push_back(&a.bandwidth);
    compute[static_cast<std::size_t>(a.satellite)].push_back(&a.compute);
  }
  for (std::size_t s = 0; s < bandwidth.size(); ++s) {
    fit_to_cap(bandwidth[s], config.bandwidth_cap);
    fit_to_cap(compute[s], 1.0);
  }
  return set;
}

int best_visible_satellite(const GraphSnapshot& snapshot, int user_id) {
  int best = -1;
  double best_elev = 0.0;
  for (const auto& e : snapshot.edges) {
    if (e.user_id != user_id) continue;
    if (best < 0 || e.elevation_deg > best_elev) {
      best = e.sat_id;
      best_elev = e.elevation_deg;
    }
  }
  return best < 0 ? 0 : best;
}

ComputeShares equal_share_compute(const std::vector<double>& needs) {
  const std::size_t n = needs.size();
  ComputeShares out{std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0), std::vector<bool>(n, false)};
  if (n == 0) return out;
  if (std::accumulate(needs.begin(), needs.end(), 0.0) > 1.0) return out;

  auto& share = out.share;
  auto& pinned = out.pinned;
  for (;;) {
    double pinned_total = 0.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pinned[i]) pinned_total += needs[i];
      else ++free_count;
    }
    if (free_count == 0) break;
    const double split = (1.0 - pinned_total) / static_cast<double>(free_count);
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!pinned[i] && needs[i] > split) {
        pinned[i] = true;
        changed = true;
      }
    }
    if (!changed) {
      for (std::size_t i = 0; i < n; ++i) share[i] = pinned[i] ? needs[i] : split;
      return out;
    }
  }
  share = needs;
  return out;
}

ActionSet equal_share_allocation(const GraphSnapshot& snapshot, const std::vector<int>& assignment,
                                 const EnvConfig& config) {
  std::map<int, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < assignment.size(); ++i) members[assignment[i]].push_back(i);

  ActionSet set;
  set.actions.resize(snapshot.user_nodes.size());
  for (const auto& [sat, users] : members) {
    const double n = static_cast<double>(users.size());
    const double b = std::min(1.0 / n, config.bandwidth_cap / n);
    std::vector<double> needs;
    for (std::size_t i : users) needs.push_back(snapshot.user_nodes[i].min_compute / config.compute_cap);
    const auto f = equal_share_compute(needs);

    std::vector<double*> b_ptrs, free_f;
    for (std::size_t k = 0; k < users.size(); ++k) {
      const std::size_t i = users[k];
      const auto& node = snapshot.user_nodes[i];
      double fk = std::clamp(f.share[k], std::numeric_limits<double>::min(), 1.0);
      const bool pinned = f.pinned[k];
      if (pinned)
        while (fk * config.compute_cap < node.min_compute && fk < 1.0) fk = std::nextafter(fk, 2.0);
      set.actions[i] = {node.user_id, sat, std::clamp(b, std::numeric_limits<double>::min(), 1.0), fk};
      b_ptrs.push_back(&set.actions[i].bandwidth);
      if (!pinned) free_f.push_back(&set.actions[i].compute);
    }
    fit_to_cap(b_ptrs, config.bandwidth_cap);
    // Pinned shares are exact requirements; rounding slack comes out of the free shares.
    auto compute_total = [&] {
      double total = 0.0;
      for (std::size_t i : users) total += set.actions[i].compute;
      return total;
    };
    while (compute_total() > 1.0 && !free_f.empty())
      for (double* v : free_f) *v = std::nextafter(*v, 0.0);
  }
  return set;
}

ActionSet greedy_policy(const GraphSnapshot& snapshot, const EnvConfig& config) {
  std::vector<int> assignment;
  assignment.reserve(snapshot.user_nodes.size());
  for (const auto& u : snapshot.user_nodes) assignment.push_back(best_visible_satellite(snapshot, u.user_id));
  return equal_share_allocation(snapshot, assignment, config);
}

ActionSet sticky_policy(const GraphSnapshot& snapshot, const EnvConfig& config) {
  std::vector<int> assignment;
  assignment.reserve(snapshot.user_nodes.size());
  for (const auto& u : snapshot.user_nodes) {
    if (u.previous_satellite && snapshot.is_visible(u.user_id, *u.previous_satellite))
      assignment.push_back(*u.previous_satellite);
    else
      assignment.push_back(best_visible_satellite(snapshot, u.user_id));
  }
  return equal_share_allocation(snapshot, assignment, config);
}

Policy make_policy(const std::string& name, const EnvConfig& config, int num_satellites, std::uint64_t seed) {
  if (name == "random") {
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng, config, num_satellites](const GraphSnapshot& s) {
      return random_policy(s, *rng, config, num_satellites);
    };
  }
  if (name == "greedy") return [config](const GraphSnapshot& s) { return greedy_policy(s, config); };
  if (name == "sticky") return [config](const GraphSnapshot& s) { return sticky_policy(s, config); };
  throw ConfigError("policy: unknown policy '" + name + "' (expected random, greedy or sticky)");
}

}  // namespace satmig
