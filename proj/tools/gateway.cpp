#include <chrono>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/gateway/server.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Console gateway: portnet topics to newline-delimited JSON / WebSocket"};
  std::optional<std::uint16_t> broker_port;
  gateway::GatewayOptions options;
  std::string script_path = tools::data_path("healthy_living.json"), grammars = tools::data_path("grammars");
  app.add_option("--gateway-port", options.port, "Console port (default 7602)");
  app.add_option("--bind", options.host, "Bind address");
  app.add_option("--broker-port", broker_port, "Broker port");
  app.add_option("--script", script_path, "Interaction script (answer choices per state)");
  app.add_option("--grammars", grammars, "Grammar directory");
  CLI11_PARSE(app, argc, argv);

  options.broker = tools::broker_endpoint(broker_port);
  auto library = std::make_shared<grammar::GrammarLibrary>(grammar::GrammarLibrary::load_directory(grammars));
  auto core = std::make_shared<gateway::GatewayCore>(library, dialogue::DialogueScript::load(script_path));
  gateway::GatewayServer server(core, options);
  server.start();
  tools::install_stop_handler();
  std::cout << "gateway listening on " << options.host << ":" << server.port() << std::endl;
  while (!tools::stop_flag()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
