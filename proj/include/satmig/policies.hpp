#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "satmig/environment.hpp"

namespace satmig {

/// Uniform visible satellite per user (any satellite when none is visible);
/// ratios uniform on (0, 1] then rescaled per satellite to respect the caps.
ActionSet random_policy(const GraphSnapshot& snapshot, std::mt19937_64& rng, const EnvConfig& config,
                        int num_satellites);

/// Highest-elevation visible satellite, equal shares per satellite.
ActionSet greedy_policy(const GraphSnapshot& snapshot, const EnvConfig& config);

/// Previous satellite while it stays visible, otherwise the greedy choice.
ActionSet sticky_policy(const GraphSnapshot& snapshot, const EnvConfig& config);

/// Compute shares for users on one satellite: equal split of 1, except users
/// whose requirement exceeds the split are pinned to it and the rest is
/// re-split among the others. Falls back to the equal split when the summed
/// requirements exceed the satellite. `needs` are fractions of F_max.
struct ComputeShares {
  std::vector<double> share;
  std::vector<bool> pinned;  // share equals the user's requirement
};

ComputeShares equal_share_compute(const std::vector<double>& needs);

/// Fills bandwidth and compute for a fixed satellite assignment using the
/// equal-share rule. `assignment[i]` is the satellite of snapshot user i.
ActionSet equal_share_allocation(const GraphSnapshot& snapshot, const std::vector<int>& assignment,
                                 const EnvConfig& config);

/// Highest-elevation visible satellite for a user (ties to the lower id);
/// satellite 0 when nothing is visible.
int best_visible_satellite(const GraphSnapshot& snapshot, int user_id);

using Policy = std::function<ActionSet(const GraphSnapshot&)>;

/// Builds a named baseline policy: "random", "greedy" or "sticky".
/// Throws ConfigError for anything else.
Policy make_policy(const std::string& name, const EnvConfig& config, int num_satellites, std::uint64_t seed);

}  // namespace satmig
