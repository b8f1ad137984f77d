#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/dialogue/node.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Scripted dialogue manager that plays the robot"};
  std::string script_path = tools::data_path("healthy_living.json");
  std::optional<std::uint16_t> broker_port;
  dialogue::DialogueNodeOptions options;
  app.add_option("--script", script_path, "Interaction script (JSON)");
  app.add_option("--broker-port", broker_port, "Broker port");
  app.add_option("--eos-delay", options.eos_delay, "Seconds between the end of a turn and the end message");
  app.add_option("--time-scale", options.time_scale, "Wall seconds per session second");
  CLI11_PARSE(app, argc, argv);

  options.broker = tools::broker_endpoint(broker_port);
  dialogue::DialogueNode node(dialogue::DialogueMachine(dialogue::DialogueScript::load(script_path)), options);
  tools::install_stop_handler();
  std::thread watcher([&node] {
    while (!tools::stop_flag()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    node.stop();
  });
  node.run();
  tools::stop_flag() = true;
  watcher.join();
  for (auto id : node.trace()) std::cout << dialogue::state_name(id) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
