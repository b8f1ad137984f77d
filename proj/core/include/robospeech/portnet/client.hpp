#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robospeech/portnet/port_name.hpp"
#include "robospeech/portnet/socket.hpp"

namespace robospeech::portnet {

struct Endpoint {
  std::string host = "127.0.0.1";
  std::uint16_t port = 7601;
};

enum class Direction { kIn, kOut };

// Seconds since the first call in this process; the default message clock.
double session_clock();

// Handle for one named port. Out-ports publish, in-ports receive everything
// published on the same name after the open call returns (no replay).
// A handle must not be polled by two consumers at once.
class Port {
 public:
  using Clock = std::function<double()>;

  static Port open(const Endpoint& broker, std::string_view name, Direction direction,
                   Clock clock = session_clock);

  Port(Port&&) noexcept;
  Port& operator=(Port&&) noexcept;
  ~Port();

  const PortName& name() const { return name_; }
  Direction direction() const { return direction_; }
  bool is_open() const;

  // Stamps with the port clock, clamped so stamps never go backwards.
  void publish(std::string_view payload);
  // Explicit stamp; throws kNonMonotonicTimestamp if earlier than the last.
  void publish_at(std::string_view payload, double timestamp);

  // Oldest queued message, or nullopt once `timeout_seconds` elapse.
  std::optional<PortMessage> next_message(double timeout_seconds);

  void close();

 private:
  struct State;
  Port(PortName name, Direction direction, std::unique_ptr<State> state);

  PortName name_;
  Direction direction_;
  std::unique_ptr<State> state_;
};

inline Port subscribe(const Endpoint& broker, std::string_view name) {
  return Port::open(broker, name, Direction::kIn);
}

std::vector<std::string> list_ports(const Endpoint& broker);

}  // namespace robospeech::portnet
