#pragma once

#include <atomic>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "satmig/protocol.hpp"

namespace satmig {

/// Bidirectional newline-delimited byte stream.
class LineChannel {
 public:
  virtual ~LineChannel() = default;
  /// Next line without the terminator; std::nullopt at end of stream.
  virtual std::optional<std::string> read_line() = 0;
  virtual void write_line(const std::string& line) = 0;
};

class StreamChannel final : public LineChannel {
 public:
  StreamChannel(std::istream& in, std::ostream& out) : in_(in), out_(out) {}
  std::optional<std::string> read_line() override;
  void write_line(const std::string& line) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// Owns a connected socket descriptor.
class SocketChannel final : public LineChannel {
 public:
  explicit SocketChannel(int fd) : fd_(fd) {}
  SocketChannel(const SocketChannel&) = delete;
  SocketChannel& operator=(const SocketChannel&) = delete;
  SocketChannel(SocketChannel&& other) noexcept : fd_(other.fd_), buffer_(std::move(other.buffer_)) { other.fd_ = -1; }
  ~SocketChannel() override;

  std::optional<std::string> read_line() override;
  void write_line(const std::string& line) override;

 private:
  int fd_ = -1;
  std::string buffer_;
};

/// Runs one session until the peer closes or sends close.
void serve(LineChannel& channel, const Scenario& scenario, Session::OutcomeHook on_outcome = {});

struct Address {
  std::string host;
  std::uint16_t port = 0;
};

/// "host:port" or ":port". Throws ConfigError on anything else.
Address parse_address(const std::string& text);

/// Listening TCP socket; port 0 picks an ephemeral port.
class TcpListener {
 public:
  explicit TcpListener(const Address& address);
  TcpListener(const TcpListener&) = delete;
  TcpListener& operator=(const TcpListener&) = delete;
  ~TcpListener();

  std::uint16_t port() const { return port_; }
  /// Blocks for the next connection; std::nullopt once the listener is closed.
  std::optional<SocketChannel> accept();
  void close();

 private:
  std::atomic<int> fd_{-1};
  std::uint16_t port_ = 0;
};

/// Accepts connections forever (or until `max_sessions` have been served),
/// one thread and one environment per session.
void serve_tcp(TcpListener& listener, const Scenario& scenario, std::optional<int> max_sessions = std::nullopt,
               Session::OutcomeHook on_outcome = {});

SocketChannel connect_tcp(const Address& address);

}  // namespace satmig
