#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "satmig/environment.hpp"
#include "satmig/errors.hpp"
#include "satmig/metrics.hpp"
#include "satmig/policies.hpp"
#include "satmig/queueing.hpp"
#include "satmig/scenario_io.hpp"

using namespace satmig;

namespace {

ActionSet all_on(const GraphSnapshot& snap, int sat, double b = 1.0, double f = 1.0) {
  ActionSet a;
  for (const auto& u : snap.user_nodes) a.actions.push_back({u.user_id, sat, b, f});
  return a;
}

Scenario shipped() { return load_scenario(SATMIG_SCENARIO_DIR "/default.json"); }

}  // namespace

TEST_CASE("reset") {
  Environment env(shipped());
  const auto a = env.reset(7);
  CHECK(a.slot == 0);
  CHECK(a.user_nodes.size() == 34);
  CHECK(a.satellite_nodes.size() == 8);
  for (const auto& u : a.user_nodes) CHECK_FALSE(u.previous_satellite.has_value());
  for (const auto& s : a.satellite_nodes) {
    CHECK(s.remaining_bandwidth_ratio == 1.0);
    CHECK(s.remaining_compute_ratio == 1.0);
    CHECK(s.remaining_beam_slots == 16);
  }
  env.step(greedy_policy(a, env.scenario().env));
  const auto b = env.reset(7);
  CHECK(a == b);
  CHECK(env.slot() == 0);
}

TEST_CASE("migration indicator") {
  CHECK(migration_indicator(1, 1) == 0);
  CHECK(migration_indicator(1, 2) == 1);
  CHECK(migration_indicator(std::nullopt, 3) == 0);
  CHECK(migration_indicator(2, std::nullopt) == 0);
  CHECK(migration_indicator({1, 1, std::nullopt}, {1, 2, 3}) == std::vector<int>{0, 1, 0});
}

TEST_CASE("constraint penalty examples") {
  auto sc = fixture::equatorial(2, 18.0, {9.0, 9.5});
  sc.env.bandwidth_cap = 1.0;
  Environment env(sc);
  const auto snap = env.reset(1);
  REQUIRE(snap.is_visible(0, 0));
  REQUIRE(snap.is_visible(1, 0));

  ActionSet ok{{{0, 0, 0.5, 0.5}, {1, 1, 0.5, 0.5}}};
  const auto r0 = constraint_penalty(ok, snap, sc.env, 2);
  CHECK(r0.penalty == 0.0);
  CHECK(r0.violations.empty());

  ActionSet heavy{{{0, 0, 0.8, 0.3}, {1, 0, 0.8, 0.3}}};
  const auto r1 = constraint_penalty(heavy, snap, sc.env, 2);
  CHECK(r1.bandwidth_excess == doctest::Approx(0.6));
  CHECK(r1.penalty == doctest::Approx(0.6 * sc.env.penalty_weights.bandwidth));
  CHECK(r1.violations == std::vector<Violation>{{ConstraintKind::bandwidth, 0}});
  CHECK(r1.infeasible == std::vector<bool>{true, true});
}

TEST_CASE("single user on a single visible satellite") {
  auto sc = fixture::equatorial(1, 0.0, {0.0});
  Environment env(sc);
  const auto snap = env.reset(3);
  REQUIRE(snap.is_visible(0, 0));
  const auto res = env.step(all_on(snap, 0));
  const auto& o = res.outcome;
  const auto& p = env.profiles()[0];
  const auto& geo_user = snap.user_nodes[0];
  const double g = propagation_gain(sc.link_budget, sc.rain,
                                    slant_range_km(propagate(sc.constellation, 0, 300.0)[0], geo_user.position,
                                                   sc.constellation),
                                    snap.edges[0].elevation_deg, 0.0, 0.0);
  const double mu = data_rate(1.0, sc.link_budget, snr(sc.link_budget, g)) / p.packet_bits;
  const double rho = p.arrival_rate_pps / mu;
  const double expected = p.service_utility_weight * p.arrival_rate_pps * 300.0 * p.packet_bits *
                          (1.0 - std::exp(-mu * (1.0 - rho) * p.max_delay_s));
  CHECK(o.reward == doctest::Approx(expected).epsilon(1e-12));
  CHECK(o.penalty_total == 0.0);
  CHECK(o.migrations_count == 0);
  CHECK(o.failures_count == 0);
  CHECK(o.per_user[0].assigned_sat == 0);
}

TEST_CASE("keeping the same satellite is not a migration") {
  Environment env(fixture::equatorial(2, 18.0, {9.0}));
  auto snap = env.reset(1);
  for (int n = 0; n < 3; ++n) {
    auto r = env.step(all_on(snap, 0));
    CHECK(r.outcome.migrations_count == 0);
    snap = r.observation;
    CHECK(snap.user_nodes[0].previous_satellite == 0);
  }
}

TEST_CASE("switching satellites costs exactly the weighted migration penalty") {
  const auto sc = fixture::equatorial(2, 18.0, {9.0});
  Environment stay(sc), move(sc);
  auto s1 = stay.reset(5);
  auto s2 = move.reset(5);
  REQUIRE(s1 == s2);
  s1 = stay.step(all_on(s1, 0)).observation;
  s2 = move.step(all_on(s2, 0)).observation;
  REQUIRE(s1.is_visible(0, 1));
  const auto a = stay.step(all_on(s1, 0)).outcome;
  const auto b = move.step(all_on(s2, 1)).outcome;
  // Delay success saturates at 1 on both links, so the served bits coincide.
  REQUIRE(a.utility == b.utility);
  CHECK(a.migrations_count == 0);
  CHECK(b.migrations_count == 1);
  CHECK(b.per_user[0].migrated == 1);
  const double beta1 = stay.profiles()[0].migration_cost_weight;
  CHECK(b.migration_cost == beta1);
  CHECK(a.reward - b.reward == doctest::Approx(sc.env.penalty_weight * beta1).epsilon(1e-12));
}

TEST_CASE("invisible choice fails, is penalised and keeps the previous assignment") {
  auto sc = fixture::equatorial(2, 180.0, {0.0});
  Environment env(sc);
  auto snap = env.reset(2);
  REQUIRE(snap.is_visible(0, 0));
  REQUIRE_FALSE(snap.is_visible(0, 1));
  snap = env.step(all_on(snap, 0)).observation;
  const auto r = env.step(all_on(snap, 1));
  const auto& u = r.outcome.per_user[0];
  CHECK(u.failed);
  CHECK(u.reason == FailureReason::invisible);
  CHECK(u.served_bits == 0.0);
  CHECK_FALSE(u.assigned_sat.has_value());
  CHECK(u.migrated == 0);
  CHECK(r.outcome.penalty_total == sc.env.penalty_weights.visibility);
  CHECK(r.observation.user_nodes[0].previous_satellite == 0);
}

TEST_CASE("beam cap keeps the highest-priority users") {
  auto sc = fixture::equatorial(1, 0.0, {0.0, 1.0, 2.0});
  sc.env.max_beams = 2;
  sc.profile_ranges.ground.service_utility_weight = {1e-9, 5e-9};
  Environment env(sc);
  const auto snap = env.reset(11);
  const auto& prof = env.profiles();
  const auto r = env.step(all_on(snap, 0, 0.3, 0.3));
  int lowest = 0;
  for (int i = 1; i < 3; ++i)
    if (prof[i].service_utility_weight < prof[lowest].service_utility_weight) lowest = i;
  for (int i = 0; i < 3; ++i) {
    const auto& u = r.outcome.per_user[static_cast<std::size_t>(i)];
    CHECK(u.failed == (i == lowest));
    if (i == lowest) CHECK(u.reason == FailureReason::beam_evicted);
  }
  CHECK(r.outcome.penalty_total == sc.env.penalty_weights.beam * 1.0);
}

TEST_CASE("beam ties go to the lower user id") {
  auto sc = fixture::equatorial(1, 0.0, {0.0, 1.0, 2.0});
  sc.env.max_beams = 1;
  Environment env(sc);
  const auto r = env.step(all_on(env.reset(1), 0, 0.3, 0.3));
  CHECK_FALSE(r.outcome.per_user[0].failed);
  CHECK(r.outcome.per_user[1].reason == FailureReason::beam_evicted);
  CHECK(r.outcome.per_user[2].reason == FailureReason::beam_evicted);
}

TEST_CASE("compute below the requirement fails the user") {
  auto sc = fixture::equatorial(1, 0.0, {0.0});
  sc.profile_ranges.ground.min_compute = fixture::fixed(5.0);
  Environment env(sc);
  auto snap = env.reset(1);
  auto r = env.step(all_on(snap, 0, 1.0, 0.4));
  CHECK(r.outcome.per_user[0].reason == FailureReason::compute);
  CHECK(r.outcome.per_user[0].served_bits == 0.0);
  CHECK(r.outcome.penalty_total == 0.0);
  r = env.step(all_on(r.observation, 0, 1.0, 0.5));
  CHECK_FALSE(r.outcome.per_user[0].failed);
}

TEST_CASE("overloaded queue fails the user") {
  auto sc = fixture::equatorial(1, 0.0, {0.0});
  sc.profile_ranges.lambda0_pps = 1e7;
  Environment env(sc);
  const auto r = env.step(all_on(env.reset(1), 0));
  CHECK(r.outcome.per_user[0].reason == FailureReason::unstable);
  CHECK(r.outcome.per_user[0].served_bits == 0.0);
}

TEST_CASE("oversubscribed satellites are throttled to the caps") {
  auto sc = fixture::equatorial(1, 0.0, {0.0, 1.0});
  Environment env(sc);
  auto snap = env.reset(1);
  const auto r = env.step(all_on(snap, 0, 0.8, 0.75));
  CHECK(r.outcome.per_user[0].effective_bandwidth == doctest::Approx(0.5));
  CHECK(r.outcome.per_user[1].effective_compute == doctest::Approx(0.5));
  CHECK(r.outcome.penalty_total ==
        doctest::Approx(sc.env.penalty_weights.bandwidth * 0.6 + sc.env.penalty_weights.compute * 0.5));
  const auto& sat = r.observation.satellite_nodes[0];
  CHECK(sat.remaining_bandwidth_ratio < 1e-12);
  CHECK(sat.remaining_compute_ratio < 1e-12);
  CHECK(sat.remaining_beam_slots == sc.env.max_beams - 2);
}

TEST_CASE("remaining capacity reflects the previous slot") {
  auto sc = fixture::equatorial(1, 0.0, {0.0});
  Environment env(sc);
  const auto r = env.step(all_on(env.reset(1), 0, 0.25, 0.5));
  CHECK(r.observation.satellite_nodes[0].remaining_bandwidth_ratio == 0.75);
  CHECK(r.observation.satellite_nodes[0].remaining_compute_ratio == 0.5);
  CHECK(r.observation.satellite_nodes[0].remaining_beam_slots == sc.env.max_beams - 1);
}

TEST_CASE("step contract errors") {
  auto sc = fixture::equatorial(1, 0.0, {0.0, 1.0});
  sc.env.num_slots = 1;
  Environment env(sc);
  auto code_of = [&](const ActionSet& a) -> std::string {
    try {
      env.step(a);
    } catch (const ProtocolError& e) {
      return e.code();
    } catch (const StateError& e) {
      return e.code();
    }
    return "";
  };
  CHECK(code_of({}) == "not_reset");
  const auto snap = env.reset(1);
  CHECK(code_of({{{0, 0, 1, 1}}}) == "action_count");
  CHECK(code_of({{{0, 0, 0.5, 0.5}, {7, 0, 0.5, 0.5}}}) == "unknown_user");
  CHECK(code_of({{{0, 0, 0.5, 0.5}, {0, 0, 0.5, 0.5}}}) == "duplicate_user");
  CHECK(code_of({{{0, 0, 0.5, 0.5}, {1, 3, 0.5, 0.5}}}) == "invalid_action");
  CHECK(code_of({{{0, 0, 0.0, 0.5}, {1, 0, 0.5, 0.5}}}) == "invalid_action");
  CHECK(code_of({{{0, 0, 0.5, 1.5}, {1, 0, 0.5, 0.5}}}) == "invalid_action");
  CHECK(env.slot() == 0);
  const auto r = env.step(all_on(snap, 0, 0.5, 0.5));
  CHECK(r.done);
  CHECK(code_of(all_on(snap, 0, 0.5, 0.5)) == "episode_done");
}

TEST_CASE("episode invariants under the random policy on the shipped scenario") {
  const auto sc = shipped();
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Environment env(sc);
    auto policy = make_policy("random", sc.env, 8, policy_seed(seed));
    auto snap = env.reset(seed);
    bool done = false;
    while (!done) {
      // Edges equal an independent visibility recomputation.
      const auto sats = propagate(sc.constellation, snap.slot, sc.env.slot_seconds);
      std::vector<Edge> expected;
      for (const auto& u : snap.user_nodes)
        for (const auto& s : sats)
          if (visible(s, u.position, sc.env.theta_min_deg, sc.constellation))
            expected.push_back({u.user_id, s.sat_id, elevation_angle(s, u.position, sc.constellation)});
      CHECK(snap.edges == expected);

      auto r = env.step(policy(snap));
      const auto& o = r.outcome;
      double utility = 0.0, migration = 0.0;
      int migrations = 0, failures = 0;
      std::vector<double> bw(8, 0.0), cpu(8, 0.0);
      std::vector<int> beams(8, 0);
      for (const auto& u : o.per_user) {
        utility += u.service_utility_weight * u.served_bits;
        migration += u.migration_cost_weight * u.migrated;
        migrations += u.migrated;
        failures += u.failed ? 1 : 0;
        if (u.assigned_sat) {
          bw[*u.assigned_sat] += u.effective_bandwidth;
          cpu[*u.assigned_sat] += u.effective_compute;
          ++beams[*u.assigned_sat];
        }
        CHECK(u.served_bits >= 0.0);
      }
      CHECK(o.reward == utility - sc.env.penalty_weight * (migration + o.penalty_total));
      CHECK(o.migrations_count == migrations);
      CHECK(o.failures_count == failures);
      for (int s = 0; s < 8; ++s) {
        CHECK(bw[s] <= sc.env.bandwidth_cap);
        CHECK(cpu[s] * sc.env.compute_cap <= sc.env.compute_cap);
        CHECK(beams[s] <= sc.env.max_beams);
      }
      snap = r.observation;
      done = r.done;
    }
  }
}
