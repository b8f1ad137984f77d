#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace robospeech::portnet {

// Owning wrapper around a connected or listening TCP socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  ~Socket();
  Socket(Socket&& other) noexcept : fd_(other.release()) {}
  Socket& operator=(Socket&& other) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const noexcept { return fd_; }
  bool valid() const noexcept { return fd_ >= 0; }
  int release() noexcept;
  void close() noexcept;
  // Unblocks readers in other threads without releasing the descriptor.
  void shutdown() noexcept;

  // Returns false if the peer went away.
  bool send_all(std::string_view data) const;

 private:
  int fd_ = -1;
};

// Throws Error(kBrokerUnreachable) on failure.
Socket connect_tcp(const std::string& host, std::uint16_t port);

// Listens on host:port; port 0 picks an ephemeral port.
Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog = 64);
std::uint16_t local_port(const Socket& socket);
std::optional<Socket> accept_client(const Socket& listener, int timeout_ms);

enum class ReadStatus { kLine, kTimeout, kClosed };

// Buffered newline-delimited reader.
class LineReader {
 public:
  explicit LineReader(const Socket& socket) : socket_(&socket) {}

  // timeout_ms < 0 waits indefinitely. The newline is stripped.
  ReadStatus read_line(std::string& line, int timeout_ms);
  // Raw bytes (used after protocol upgrades); returns empty on close.
  std::optional<std::string> read_some(int timeout_ms);
  std::string take_buffer();

 private:
  const Socket* socket_;
  std::string buffer_;
};

}  // namespace robospeech::portnet
