#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "robospeech/gateway/protocol.hpp"
#include "robospeech/portnet/client.hpp"
#include "robospeech/portnet/socket.hpp"

namespace robospeech::gateway {

struct GatewayOptions {
  portnet::Endpoint broker;
  std::string host = "127.0.0.1";
  std::uint16_t port = kDefaultPort;  // 0 = ephemeral
};

// Console socket server. A connection speaks newline-delimited JSON unless
// its first bytes are an HTTP WebSocket upgrade, after which each text frame
// carries one JSON object. Every bridged portnet message is sent to every
// connection in arrival order; command frames are validated and forwarded on
// /Operator/Command, answered with an ack or error frame.
class GatewayServer {
 public:
  GatewayServer(std::shared_ptr<GatewayCore> core, GatewayOptions options);
  ~GatewayServer();
  GatewayServer(const GatewayServer&) = delete;
  GatewayServer& operator=(const GatewayServer&) = delete;

  void start();
  void stop();
  std::uint16_t port() const { return port_; }
  std::size_t connections() const;
  GatewayCore& core() { return *core_; }

 private:
  class Connection;

  void accept_loop();
  void bridge_loop(portnet::Port port);
  void broadcast(const std::string& frame);
  void handle_command(Connection& connection, const std::string& frame);

  std::shared_ptr<GatewayCore> core_;
  GatewayOptions options_;
  portnet::Socket listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::vector<std::thread> bridges_;
  std::unique_ptr<portnet::Port> operator_out_;
  std::mutex operator_mutex_;

  mutable std::mutex connections_mutex_;
  std::vector<std::shared_ptr<Connection>> connections_;
};

}  // namespace robospeech::gateway
