#include <chrono>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/portnet/broker.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Port broker for the robot speech stack"};
  std::optional<std::uint16_t> port;
  std::string bind = "127.0.0.1";
  app.add_option("--broker-port", port, "TCP port (default 7601, env ROBOSPEECH_BROKER_PORT)");
  app.add_option("--bind", bind, "Bind address");
  CLI11_PARSE(app, argc, argv);

  portnet::BrokerOptions options;
  options.bind_address = bind;
  options.port = portnet::resolve_broker_port(port);
  portnet::Broker broker(options);
  broker.start();
  tools::install_stop_handler();
  std::cout << "broker listening on " << bind << ":" << broker.port() << std::endl;
  while (!tools::stop_flag()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  broker.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
