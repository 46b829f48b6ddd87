#include "satmig/transport.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>
#include <vector>

#include "satmig/errors.hpp"

namespace satmig {

std::optional<std::string> StreamChannel::read_line() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

void StreamChannel::write_line(const std::string& line) {
  out_ << line << '\n';
  out_.flush();
}

SocketChannel::~SocketChannel() {
  if (fd_ >= 0) ::close(fd_);
}

std::optional<std::string> SocketChannel::read_line() {
  for (;;) {
    if (auto pos = buffer_.find('\n'); pos != std::string::npos) {
      std::string line = buffer_.substr(0, pos);
      buffer_.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    char chunk[4096];
    const ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) {
      if (buffer_.empty()) return std::nullopt;
      std::string rest = std::move(buffer_);
      buffer_.clear();
      return rest;
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void SocketChannel::write_line(const std::string& line) {
  std::string data = line + '\n';
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) throw std::runtime_error(std::string("socket write failed: ") + std::strerror(errno));
    sent += static_cast<std::size_t>(n);
  }
}

void serve(LineChannel& channel, const Scenario& scenario, Session::OutcomeHook on_outcome) {
  Session session(scenario, std::move(on_outcome));
  while (!session.closed()) {
    auto line = channel.read_line();
    if (!line) break;
    if (line->empty()) continue;
    for (const auto& reply : session.handle(*line)) channel.write_line(reply);
  }
}

Address parse_address(const std::string& text) {
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) throw ConfigError("listen: expected host:port, got '" + text + "'");
  Address a;
  a.host = text.substr(0, colon);
  if (a.host.empty()) a.host = "127.0.0.1";
  const std::string port = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    const int p = std::stoi(port, &used);
    if (used != port.size() || p < 0 || p > 65535) throw std::out_of_range("port");
    a.port = static_cast<std::uint16_t>(p);
  } catch (const std::exception&) {
    throw ConfigError("listen: invalid port in '" + text + "'");
  }
  return a;
}

namespace {

sockaddr_in resolve(const Address& address) {
  sockaddr_in sa{};
  sa.sin_family = AF_INET;
  sa.sin_port = htons(address.port);
  if (::inet_pton(AF_INET, address.host.c_str(), &sa.sin_addr) == 1) return sa;
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(address.host.c_str(), nullptr, &hints, &res) != 0 || !res)
    throw ConfigError("cannot resolve host '" + address.host + "'");
  sa.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
  ::freeaddrinfo(res);
  return sa;
}

}  // namespace

TcpListener::TcpListener(const Address& address) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in sa = resolve(address);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0 || ::listen(fd, 16) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error("cannot listen on " + address.host + ":" + std::to_string(address.port) + ": " + err);
  }
  socklen_t len = sizeof sa;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&sa), &len);
  port_ = ntohs(sa.sin_port);
  fd_ = fd;
}

TcpListener::~TcpListener() { close(); }

void TcpListener::close() {
  const int fd = fd_.exchange(-1);
  if (fd >= 0) {
    ::shutdown(fd, SHUT_RDWR);
    ::close(fd);
  }
}

std::optional<SocketChannel> TcpListener::accept() {
  for (;;) {
    const int fd = fd_.load();
    if (fd < 0) return std::nullopt;
    const int client = ::accept(fd, nullptr, nullptr);
    if (client >= 0) return SocketChannel(client);
    if (errno == EINTR || errno == ECONNABORTED) continue;
    return std::nullopt;
  }
}

void serve_tcp(TcpListener& listener, const Scenario& scenario, std::optional<int> max_sessions,
               Session::OutcomeHook on_outcome) {
  std::vector<std::thread> sessions;
  int served = 0;
  while (!max_sessions || served < *max_sessions) {
    auto channel = listener.accept();
    if (!channel) break;
    ++served;
    sessions.emplace_back([ch = std::move(*channel), &scenario, on_outcome]() mutable {
      try {
        serve(ch, scenario, on_outcome);
      } catch (const std::exception&) {
        // Peer went away mid-write; the session simply ends.
      }
    });
  }
  for (auto& t : sessions) t.join();
}

SocketChannel connect_tcp(const Address& address) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  sockaddr_in sa = resolve(address);
  if (::connect(fd, reinterpret_cast<sockaddr*>(&sa), sizeof sa) != 0) {
    const std::string err = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error("cannot connect to " + address.host + ":" + std::to_string(address.port) + ": " + err);
  }
  return SocketChannel(fd);
}

}  // namespace satmig
