#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "robospeech/portnet/socket.hpp"

namespace robospeech::portnet {

inline constexpr std::uint16_t kDefaultBrokerPort = 7601;
inline constexpr const char* kBrokerPortEnv = "ROBOSPEECH_BROKER_PORT";

// Explicit flag value wins, then the environment variable, then the default.
std::uint16_t resolve_broker_port(std::optional<std::uint16_t> flag);

struct BrokerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = kDefaultBrokerPort;  // 0 = ephemeral
};

// Central router for named ports. Every client connection carries exactly
// one port: an out-port that publishes, or an in-port (subscription). Each
// connection gets its own unbounded outbound queue and writer thread, so a
// slow subscriber never blocks a publisher; per publisher/subscriber pair
// delivery order equals publish order.
class Broker {
 public:
  explicit Broker(BrokerOptions options = {});
  ~Broker();
  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  void start();
  void stop();
  std::uint16_t port() const noexcept { return port_; }

  // Registered port names, out-ports and in-ports alike, sorted.
  std::vector<std::string> ports() const;

 private:
  class Connection;

  void accept_loop();
  void serve(std::shared_ptr<Connection> connection);
  void handle_control(const std::shared_ptr<Connection>& connection, const std::string& line);
  void route(const std::shared_ptr<Connection>& from, const std::string& line);
  void drop(const std::shared_ptr<Connection>& connection);

  BrokerOptions options_;
  Socket listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;

  mutable std::mutex mutex_;
  std::map<std::string, std::weak_ptr<Connection>> out_ports_;
  std::map<std::string, std::vector<std::weak_ptr<Connection>>> subscribers_;
  std::vector<std::shared_ptr<Connection>> connections_;
  std::vector<std::thread> workers_;
};

}  // namespace robospeech::portnet
