#pragma once

#include <stdexcept>
#include <string>

namespace satmig {

/// Invalid scenario or configuration values. The message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request that does not fit the environment contract (bad action set, malformed message).
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Operation not valid in the current episode state (e.g. step after done).
class StateError : public std::runtime_error {
 public:
  StateError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace satmig
