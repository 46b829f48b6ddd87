#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fixtures.hpp"
#include "satmig/errors.hpp"
#include "satmig/policies.hpp"
#include "satmig/scenario_io.hpp"

using namespace satmig;

namespace {

GraphSnapshot one_sat_snapshot(std::vector<double> min_compute) {
  GraphSnapshot s;
  s.satellite_nodes.push_back({0, {}, 1.0, 1.0, 16});
  for (std::size_t i = 0; i < min_compute.size(); ++i) {
    UserNode u;
    u.user_id = static_cast<int>(i);
    u.min_compute = min_compute[i];
    s.user_nodes.push_back(u);
    s.edges.push_back({u.user_id, 0, 45.0});
  }
  return s;
}

// Max-min fair refinement found by enumerating which users sit exactly at
// their requirement while the rest split the remainder equally.
std::vector<double> enumerate_fair(const std::vector<double>& needs) {
  const std::size_t n = needs.size();
  std::vector<double> best(n, 1.0 / static_cast<double>(n));
  double best_min = -1.0;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    double pinned = 0.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) pinned += needs[i];
      else ++free_count;
    }
    std::vector<double> f(n);
    const double split = free_count ? (1.0 - pinned) / static_cast<double>(free_count) : 0.0;
    bool feasible = pinned <= 1.0 + 1e-15;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = (mask & (1u << i)) ? needs[i] : split;
      feasible = feasible && f[i] >= needs[i] - 1e-15;
    }
    if (!feasible) continue;
    // Lexicographic max-min: compare sorted share vectors.
    auto sorted = f;
    std::sort(sorted.begin(), sorted.end());
    auto sorted_best = best;
    std::sort(sorted_best.begin(), sorted_best.end());
    if (best_min < 0.0 || sorted > sorted_best) {
      best = f;
      best_min = sorted.front();
    }
  }
  return best;
}

}  // namespace

TEST_CASE("greedy equal shares") {
  EnvConfig cfg;
  SUBCASE("one user takes everything") {
    const auto a = greedy_policy(one_sat_snapshot({0.0}), cfg);
    CHECK(a.actions[0].bandwidth == cfg.bandwidth_cap);
    CHECK(a.actions[0].compute == 1.0);
  }
  SUBCASE("two users split the band") {
    cfg.bandwidth_cap = 0.8;
    const auto a = greedy_policy(one_sat_snapshot({0.0, 0.0}), cfg);
    CHECK(a.actions[0].bandwidth == doctest::Approx(0.4));
    CHECK(a.actions[1].bandwidth == doctest::Approx(0.4));
    CHECK(a.actions[0].compute == doctest::Approx(0.5));
  }
}

TEST_CASE("greedy compute redistribution matches the enumerated fair refinement") {
  EnvConfig cfg;
  cfg.compute_cap = 10.0;
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> need(0.0, 6.0);
  int feasible_cases = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<double> z{need(rng), need(rng), need(rng)};
    if (trial == 0) z = {6.0, 0.5, 0.5};  // one requirement dominates
    const auto a = greedy_policy(one_sat_snapshot(z), cfg);
    std::vector<double> fractions;
    for (double v : z) fractions.push_back(v / cfg.compute_cap);
    const bool feasible = fractions[0] + fractions[1] + fractions[2] <= 1.0;
    const auto expected = enumerate_fair(fractions);
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(a.actions[i].compute == doctest::Approx(expected[i]).epsilon(1e-12));
      total += a.actions[i].compute;
      if (feasible) CHECK(a.actions[i].compute * cfg.compute_cap >= z[i]);
    }
    CHECK(total <= 1.0);
    feasible_cases += feasible ? 1 : 0;
  }
  CHECK(feasible_cases > 100);
}

TEST_CASE("greedy dominant requirement example") {
  EnvConfig cfg;
  const auto a = greedy_policy(one_sat_snapshot({6.0, 0.5, 0.5}), cfg);
  CHECK(a.actions[0].compute * cfg.compute_cap >= 6.0);
  CHECK(a.actions[1].compute == doctest::Approx(0.2));
  CHECK(a.actions[2].compute == doctest::Approx(0.2));
}

TEST_CASE("greedy picks the highest elevation and breaks ties to the lower id") {
  GraphSnapshot s;
  s.user_nodes.push_back({});
  s.edges = {{0, 0, 30.0}, {0, 1, 60.0}, {0, 2, 60.0}};
  CHECK(best_visible_satellite(s, 0) == 1);
  s.edges.clear();
  CHECK(best_visible_satellite(s, 0) == 0);
}

TEST_CASE("random policy with a single visible satellite always picks it") {
  GraphSnapshot s;
  for (int i = 0; i < 5; ++i) {
    UserNode u;
    u.user_id = i;
    s.user_nodes.push_back(u);
    s.edges.push_back({i, 3, 40.0});
  }
  EnvConfig cfg;
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const auto a = random_policy(s, rng, cfg, 8);
    double b = 0.0, f = 0.0;
    for (const auto& x : a.actions) {
      CHECK(x.satellite == 3);
      CHECK(x.bandwidth > 0.0);
      CHECK(x.bandwidth <= 1.0);
      CHECK(x.compute > 0.0);
      b += x.bandwidth;
      f += x.compute;
    }
    CHECK(b <= cfg.bandwidth_cap);
    CHECK(f * cfg.compute_cap <= cfg.compute_cap);
  }
}

TEST_CASE("random policy is deterministic per seed") {
  const auto sc = load_scenario(SATMIG_SCENARIO_DIR "/default.json");
  Environment env(sc);
  const auto snap = env.reset(1);
  auto p1 = make_policy("random", sc.env, 8, 99);
  auto p2 = make_policy("random", sc.env, 8, 99);
  for (int i = 0; i < 5; ++i) CHECK(p1(snap) == p2(snap));
}

TEST_CASE("random satellite choice is uniform over the visible set") {
  const auto sc = load_scenario(SATMIG_SCENARIO_DIR "/default.json");
  Environment env(sc);
  const auto snap = env.reset(1);
  // Pick the user with the most visible satellites.
  int user = -1;
  std::vector<int> sats;
  for (const auto& u : snap.user_nodes) {
    std::vector<int> vis;
    for (const auto& e : snap.edges)
      if (e.user_id == u.user_id) vis.push_back(e.sat_id);
    if (vis.size() > sats.size()) {
      sats = vis;
      user = u.user_id;
    }
  }
  REQUIRE(sats.size() >= 3);
  std::mt19937_64 rng(2024);
  std::map<int, int> counts;
  const int draws = 10000;
  const auto idx = static_cast<std::size_t>(user);
  for (int i = 0; i < draws; ++i) ++counts[random_policy(snap, rng, sc.env, 8).actions[idx].satellite];
  const double k = static_cast<double>(sats.size());
  const double expect = draws / k;
  const double sigma = std::sqrt(draws * (1.0 / k) * (1.0 - 1.0 / k));
  double chi2 = 0.0;
  for (int s : sats) {
    CHECK(std::abs(counts[s] - expect) < 3.0 * sigma);
    chi2 += (counts[s] - expect) * (counts[s] - expect) / expect;
  }
  CHECK(counts.size() == sats.size());
  // 0.999 quantile of chi-square with up to 7 degrees of freedom is below 24.33.
  CHECK(chi2 < 24.33);
}

TEST_CASE("sticky keeps its satellite until it sets, then migrates once") {
  auto sc = fixture::equatorial(3, 120.0, {0.0});
  sc.env.num_slots = 60;
  Environment env(sc);
  auto snap = env.reset(1);
  int migrations = 0, first_migration = -1;
  bool lost = false;
  while (true) {
    const bool had_sat0 = snap.is_visible(0, 0);
    if (!had_sat0) lost = true;
    auto r = env.step(sticky_policy(snap, sc.env));
    if (r.outcome.migrations_count > 0 && first_migration < 0) first_migration = snap.slot;
    migrations += r.outcome.migrations_count;
    if (!lost) CHECK(r.outcome.per_user[0].assigned_sat == 0);
    snap = r.observation;
    if (r.done) break;
  }
  CHECK(lost);
  CHECK(migrations == 1);
  CHECK(first_migration > 0);
}

TEST_CASE("unknown policy name") { CHECK_THROWS_AS(make_policy("oracle", EnvConfig{}, 8, 1), ConfigError); }
