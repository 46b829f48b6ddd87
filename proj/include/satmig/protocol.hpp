#pragma once

// Line-delimited JSON environment protocol, version 1.
//
// Every message is one JSON object on one line with "type" and "version".
// Client requests: hello, reset {seed?}, step {actions}, close.
// Server replies: hello, observation, transition, error {code, message}, close.
// Unknown fields are ignored.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "satmig/environment.hpp"

namespace satmig {

inline constexpr int kProtocolVersion = 1;

/// Column names of the per-node feature arrays carried in observations.
const std::vector<std::string>& satellite_feature_names();
const std::vector<std::string>& user_feature_names();

nlohmann::json snapshot_to_json(const GraphSnapshot& snapshot);
GraphSnapshot snapshot_from_json(const nlohmann::json& obj);

/// Three parallel maps keyed by user id: satellite, bandwidth, compute.
nlohmann::json actions_to_json(const ActionSet& actions);
ActionSet actions_from_json(const nlohmann::json& obj);

nlohmann::json outcome_to_json(const SlotOutcome& outcome);
SlotOutcome outcome_from_json(const nlohmann::json& obj);

nlohmann::json error_message(const std::string& code, const std::string& message);

/// Server side of one protocol session. Owns its environment.
class Session {
 public:
  using OutcomeHook = std::function<void(int episode, std::uint64_t seed, const SlotOutcome&)>;

  explicit Session(const Scenario& scenario, OutcomeHook on_outcome = {});

  /// Handles one request line and returns the reply lines (usually one).
  std::vector<std::string> handle(std::string_view line);

  bool closed() const { return closed_; }

 private:
  nlohmann::json dispatch(const nlohmann::json& msg);

  Environment env_;
  OutcomeHook on_outcome_;
  bool greeted_ = false;
  bool closed_ = false;
  int episode_ = -1;
  std::uint64_t seed_ = 0;
};

/// Client-side helpers for building request lines.
std::string hello_request();
std::string reset_request(std::optional<std::uint64_t> seed);
std::string step_request(const ActionSet& actions);
std::string close_request();

}  // namespace satmig
