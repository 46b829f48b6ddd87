#include "satmig/protocol.hpp"

#include <algorithm>

#include "satmig/errors.hpp"

namespace satmig {

using nlohmann::json;

const std::vector<std::string>& satellite_feature_names() {
  static const std::vector<std::string> names{"x_km", "y_km", "z_km", "remaining_bandwidth", "remaining_compute",
                                              "remaining_beams"};
  return names;
}

const std::vector<std::string>& user_feature_names() {
  static const std::vector<std::string> names{"lat_deg",          "lon_deg",     "alt_km",
                                              "priority",         "arrival_rate_pps", "min_compute",
                                              "previous_satellite"};
  return names;
}

namespace {

UserKind kind_from_string(const std::string& s) {
  if (s == "ground") return UserKind::ground;
  if (s == "flight") return UserKind::flight;
  throw ProtocolError("bad_request", "unknown user kind '" + s + "'");
}

FailureReason reason_from_string(const std::string& s) {
  for (auto r : {FailureReason::none, FailureReason::invisible, FailureReason::beam_evicted, FailureReason::compute,
                 FailureReason::unstable})
    if (s == to_string(r)) return r;
  throw ProtocolError("bad_request", "unknown failure reason '" + s + "'");
}

json with_header(const char* type, json body = json::object()) {
  body["type"] = type;
  body["version"] = kProtocolVersion;
  return body;
}

}  // namespace

json snapshot_to_json(const GraphSnapshot& s) {
  json sats = json::array();
  for (const auto& n : s.satellite_nodes)
    sats.push_back({{"id", n.sat_id},
                    {"features",
                     {n.position_ecef_km.x, n.position_ecef_km.y, n.position_ecef_km.z, n.remaining_bandwidth_ratio,
                      n.remaining_compute_ratio, n.remaining_beam_slots}}});
  json users = json::array();
  for (const auto& u : s.user_nodes)
    users.push_back({{"id", u.user_id},
                     {"kind", to_string(u.kind)},
                     {"features",
                      {u.position.lat_deg, u.position.lon_deg, u.position.alt_km, u.priority, u.arrival_rate_pps,
                       u.min_compute, u.previous_satellite ? *u.previous_satellite : -1}}});
  json edges = json::array();
  for (const auto& e : s.edges) edges.push_back({e.user_id, e.sat_id, e.elevation_deg});
  return {{"slot", s.slot}, {"satellites", std::move(sats)}, {"users", std::move(users)}, {"edges", std::move(edges)}};
}

GraphSnapshot snapshot_from_json(const json& obj) {
  GraphSnapshot s;
  try {
    s.slot = obj.at("slot").get<int>();
    for (const auto& n : obj.at("satellites")) {
      const auto& f = n.at("features");
      s.satellite_nodes.push_back({n.at("id").get<int>(),
                                   {f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()},
                                   f.at(3).get<double>(),
                                   f.at(4).get<double>(),
                                   f.at(5).get<int>()});
    }
    for (const auto& n : obj.at("users")) {
      const auto& f = n.at("features");
      UserNode u{n.at("id").get<int>(),
                 kind_from_string(n.at("kind").get<std::string>()),
                 {f.at(0).get<double>(), f.at(1).get<double>(), f.at(2).get<double>()},
                 f.at(3).get<double>(),
                 f.at(4).get<double>(),
                 f.at(5).get<double>(),
                 std::nullopt};
      if (const int prev = f.at(6).get<int>(); prev >= 0) u.previous_satellite = prev;
      s.user_nodes.push_back(u);
    }
    for (const auto& e : obj.at("edges"))
      s.edges.push_back({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>()});
  } catch (const json::exception& e) {
    throw ProtocolError("bad_request", std::string("malformed observation: ") + e.what());
  }
  return s;
}

json actions_to_json(const ActionSet& actions) {
  json sat = json::object(), bw = json::object(), cpu = json::object();
  for (const auto& a : actions.actions) {
    const std::string key = std::to_string(a.user_id);
    sat[key] = a.satellite;
    bw[key] = a.bandwidth;
    cpu[key] = a.compute;
  }
  return {{"satellite", std::move(sat)}, {"bandwidth", std::move(bw)}, {"compute", std::move(cpu)}};
}

ActionSet actions_from_json(const json& obj) {
  ActionSet set;
  try {
    const auto& sat = obj.at("satellite");
    const auto& bw = obj.at("bandwidth");
    const auto& cpu = obj.at("compute");
    if (!sat.is_object() || !bw.is_object() || !cpu.is_object())
      throw ProtocolError("bad_request", "actions.satellite, actions.bandwidth and actions.compute must be objects");
    if (bw.size() != sat.size() || cpu.size() != sat.size())
      throw ProtocolError("bad_request", "action maps must have the same user ids");
    for (const auto& [key, value] : sat.items()) {
      std::size_t used = 0;
      const int id = std::stoi(key, &used);
      if (used != key.size()) throw ProtocolError("bad_request", "user id keys must be integers");
      if (!value.is_number_integer()) throw ProtocolError("bad_request", "satellite for user " + key + " must be an integer");
      set.actions.push_back({id, value.get<int>(), bw.at(key).get<double>(), cpu.at(key).get<double>()});
    }
  } catch (const json::exception& e) {
    throw ProtocolError("bad_request", std::string("malformed actions: ") + e.what());
  } catch (const std::logic_error&) {
    throw ProtocolError("bad_request", "user id keys must be integers");
  }
  std::sort(set.actions.begin(), set.actions.end(),
            [](const UserAction& a, const UserAction& b) { return a.user_id < b.user_id; });
  return set;
}

json outcome_to_json(const SlotOutcome& o) {
  json users = json::array();
  for (const auto& u : o.per_user)
    users.push_back({{"id", u.user_id},
                     {"chosen", u.chosen_sat},
                     {"assigned", u.assigned_sat ? json(*u.assigned_sat) : json(nullptr)},
                     {"served_bits", u.served_bits},
                     {"migrated", u.migrated},
                     {"failed", u.failed},
                     {"reason", to_string(u.reason)},
                     {"bandwidth", u.effective_bandwidth},
                     {"compute", u.effective_compute},
                     {"rate_bps", u.effective_rate_bps},
                     {"utility_weight", u.service_utility_weight},
                     {"migration_weight", u.migration_cost_weight}});
  return {{"slot", o.slot},
          {"reward", o.reward},
          {"utility", o.utility},
          {"migration_cost", o.migration_cost},
          {"penalty", o.penalty_total},
          {"migrations", o.migrations_count},
          {"failures", o.failures_count},
          {"active_users", o.active_users},
          {"users", std::move(users)}};
}

SlotOutcome outcome_from_json(const json& obj) {
  SlotOutcome o;
  try {
    o.slot = obj.at("slot").get<int>();
    o.reward = obj.at("reward").get<double>();
    o.utility = obj.at("utility").get<double>();
    o.migration_cost = obj.at("migration_cost").get<double>();
    o.penalty_total = obj.at("penalty").get<double>();
    o.migrations_count = obj.at("migrations").get<int>();
    o.failures_count = obj.at("failures").get<int>();
    o.active_users = obj.at("active_users").get<int>();
    for (const auto& u : obj.at("users")) {
      UserOutcome uo;
      uo.user_id = u.at("id").get<int>();
      uo.chosen_sat = u.at("chosen").get<int>();
      if (!u.at("assigned").is_null()) uo.assigned_sat = u.at("assigned").get<int>();
      uo.served_bits = u.at("served_bits").get<double>();
      uo.migrated = u.at("migrated").get<int>();
      uo.failed = u.at("failed").get<bool>();
      uo.reason = reason_from_string(u.at("reason").get<std::string>());
      uo.effective_bandwidth = u.at("bandwidth").get<double>();
      uo.effective_compute = u.at("compute").get<double>();
      uo.effective_rate_bps = u.at("rate_bps").get<double>();
      uo.service_utility_weight = u.at("utility_weight").get<double>();
      uo.migration_cost_weight = u.at("migration_weight").get<double>();
      o.per_user.push_back(uo);
    }
  } catch (const json::exception& e) {
    throw ProtocolError("bad_request", std::string("malformed outcome: ") + e.what());
  }
  return o;
}

json error_message(const std::string& code, const std::string& message) {
  return with_header("error", {{"code", code}, {"message", message}});
}

Session::Session(const Scenario& scenario, OutcomeHook on_outcome)
    : env_(scenario), on_outcome_(std::move(on_outcome)) {}

std::vector<std::string> Session::handle(std::string_view line) {
  if (closed_) return {};
  json msg;
  try {
    msg = json::parse(line);
  } catch (const json::parse_error& e) {
    return {error_message("parse_error", e.what()).dump()};
  }
  try {
    return {dispatch(msg).dump()};
  } catch (const ProtocolError& e) {
    return {error_message(e.code(), e.what()).dump()};
  } catch (const StateError& e) {
    return {error_message(e.code(), e.what()).dump()};
  } catch (const std::exception& e) {
    return {error_message("internal", e.what()).dump()};
  }
}

json Session::dispatch(const json& msg) {
  if (!msg.is_object()) throw ProtocolError("bad_request", "message must be a JSON object");
  auto type_it = msg.find("type");
  if (type_it == msg.end() || !type_it->is_string()) throw ProtocolError("bad_request", "missing 'type' field");
  auto version_it = msg.find("version");
  if (version_it == msg.end() || !version_it->is_number_integer())
    throw ProtocolError("bad_request", "missing 'version' field");
  if (version_it->get<int>() != kProtocolVersion) {
    closed_ = true;
    return error_message("version_mismatch", "server speaks protocol version " + std::to_string(kProtocolVersion));
  }

  const std::string type = type_it->get<std::string>();
  if (type == "hello") {
    greeted_ = true;
    const auto& sc = env_.scenario();
    return with_header("hello", {{"server", "satmig"},
                                 {"scenario", sc.name},
                                 {"num_satellites", sc.constellation.num_satellites},
                                 {"num_slots", sc.env.num_slots},
                                 {"max_users", sc.max_users()},
                                 {"satellite_features", satellite_feature_names()},
                                 {"user_features", user_feature_names()}});
  }
  if (type == "close") {
    closed_ = true;
    return with_header("close");
  }
  if (!greeted_) throw ProtocolError("hello_required", "send hello before '" + type + "'");

  if (type == "reset") {
    std::uint64_t seed = env_.scenario().env.seed;
    if (auto it = msg.find("seed"); it != msg.end() && !it->is_null()) {
      if (!it->is_number_unsigned() && !it->is_number_integer())
        throw ProtocolError("bad_request", "seed must be a non-negative integer");
      if (it->is_number_integer() && it->get<std::int64_t>() < 0)
        throw ProtocolError("bad_request", "seed must be a non-negative integer");
      seed = it->get<std::uint64_t>();
    }
    const GraphSnapshot obs = env_.reset(seed);
    ++episode_;
    seed_ = seed;
    return with_header("observation", {{"observation", snapshot_to_json(obs)}});
  }
  if (type == "step") {
    if (!env_.started()) throw StateError("not_reset", "step before reset");
    if (env_.done()) throw StateError("episode_done", "episode already finished; send reset");
    auto it = msg.find("actions");
    if (it == msg.end()) throw ProtocolError("bad_request", "step requires 'actions'");
    const StepResult r = env_.step(actions_from_json(*it));
    if (on_outcome_) on_outcome_(episode_, seed_, r.outcome);
    return with_header("transition", {{"observation", snapshot_to_json(r.observation)},
                                      {"outcome", outcome_to_json(r.outcome)},
                                      {"done", r.done}});
  }
  throw ProtocolError("unknown_type", "unknown message type '" + type + "'");
}

std::string hello_request() { return with_header("hello").dump(); }

std::string reset_request(std::optional<std::uint64_t> seed) {
  json body = json::object();
  if (seed) body["seed"] = *seed;
  return with_header("reset", std::move(body)).dump();
}

std::string step_request(const ActionSet& actions) {
  return with_header("step", {{"actions", actions_to_json(actions)}}).dump();
}

std::string close_request() { return with_header("close").dump(); }

}  // namespace satmig
