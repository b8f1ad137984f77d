#include "robospeech/portnet/socket.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "robospeech/error.hpp"

namespace robospeech::portnet {
namespace {

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

sockaddr_in make_address(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  std::string resolved = host == "localhost" ? "127.0.0.1" : host;
  if (::inet_pton(AF_INET, resolved.c_str(), &addr.sin_addr) != 1) {
    addrinfo hints{};
    hints.ai_family = AF_INET;
    addrinfo* info = nullptr;
    if (::getaddrinfo(host.c_str(), nullptr, &hints, &info) != 0 || info == nullptr) {
      throw Error(ErrorCode::kBrokerUnreachable, "cannot resolve host " + host);
    }
    addr.sin_addr = reinterpret_cast<sockaddr_in*>(info->ai_addr)->sin_addr;
    ::freeaddrinfo(info);
  }
  return addr;
}

}  // namespace

Socket::~Socket() { close(); }

Socket& Socket::operator=(Socket&& other) noexcept {
  if (this != &other) {
    close();
    fd_ = other.release();
  }
  return *this;
}

int Socket::release() noexcept {
  int fd = fd_;
  fd_ = -1;
  return fd;
}

void Socket::close() noexcept {
  if (fd_ >= 0) {
    ::close(fd_);
    fd_ = -1;
  }
}

void Socket::shutdown() noexcept {
  if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

bool Socket::send_all(std::string_view data) const {
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    ssize_t n = ::send(fd_, p, left, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  return true;
}

Socket connect_tcp(const std::string& host, std::uint16_t port) {
  sockaddr_in addr = make_address(host, port);
  Socket socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!socket.valid()) throw Error(ErrorCode::kBrokerUnreachable, std::strerror(errno));
  if (::connect(socket.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw Error(ErrorCode::kBrokerUnreachable,
                host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  }
  set_nodelay(socket.fd());
  return socket;
}

Socket listen_tcp(const std::string& host, std::uint16_t port, int backlog) {
  sockaddr_in addr = make_address(host, port);
  Socket socket(::socket(AF_INET, SOCK_STREAM, 0));
  if (!socket.valid()) throw Error(ErrorCode::kInvalidArgument, std::strerror(errno));
  int one = 1;
  ::setsockopt(socket.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(socket.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "bind " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));
  }
  if (::listen(socket.fd(), backlog) != 0) {
    throw Error(ErrorCode::kInvalidArgument, std::string("listen: ") + std::strerror(errno));
  }
  return socket;
}

std::uint16_t local_port(const Socket& socket) {
  sockaddr_in addr{};
  socklen_t len = sizeof(addr);
  ::getsockname(socket.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  return ntohs(addr.sin_port);
}

std::optional<Socket> accept_client(const Socket& listener, int timeout_ms) {
  pollfd pfd{listener.fd(), POLLIN, 0};
  int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready <= 0 || !(pfd.revents & POLLIN)) return std::nullopt;
  int fd = ::accept(listener.fd(), nullptr, nullptr);
  if (fd < 0) return std::nullopt;
  set_nodelay(fd);
  return Socket(fd);
}

ReadStatus LineReader::read_line(std::string& line, int timeout_ms) {
  using Clock = std::chrono::steady_clock;
  const auto deadline = Clock::now() + std::chrono::milliseconds(timeout_ms < 0 ? 0 : timeout_ms);
  while (true) {
    auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      line.assign(buffer_, 0, newline);
      buffer_.erase(0, newline + 1);
      return ReadStatus::kLine;
    }
    int wait = -1;
    if (timeout_ms >= 0) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      wait = static_cast<int>(std::max<long long>(0, left.count()));
    }
    pollfd pfd{socket_->fd(), POLLIN, 0};
    int ready = ::poll(&pfd, 1, wait);
    if (ready < 0 && errno == EINTR) continue;
    if (ready == 0) return ReadStatus::kTimeout;
    if (ready < 0) return ReadStatus::kClosed;
    char chunk[4096];
    ssize_t n = ::recv(socket_->fd(), chunk, sizeof(chunk), 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return ReadStatus::kClosed;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

std::optional<std::string> LineReader::read_some(int timeout_ms) {
  if (!buffer_.empty()) return take_buffer();
  pollfd pfd{socket_->fd(), POLLIN, 0};
  int ready = ::poll(&pfd, 1, timeout_ms);
  if (ready == 0) return std::string();
  if (ready < 0) return std::nullopt;
  char chunk[4096];
  ssize_t n = ::recv(socket_->fd(), chunk, sizeof(chunk), 0);
  if (n <= 0) return std::nullopt;
  return std::string(chunk, static_cast<std::size_t>(n));
}

std::string LineReader::take_buffer() {
  std::string out;
  out.swap(buffer_);
  return out;
}

}  // namespace robospeech::portnet
