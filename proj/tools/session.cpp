#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/decoder/result_log.hpp"
#include "robospeech/sim/live_session.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Run the full live stack (broker, recognizer, dialogue, simulated child) in one process"};
  sim::LiveSessionOptions options;
  std::string script_path = tools::data_path("healthy_living.json"), grammars = tools::data_path("grammars");
  std::optional<std::uint16_t> gateway_port;
  app.add_option("--seed", options.seed, "Random seed for the child");
  app.add_option("--confusion", options.confusion, "Confusion probability");
  app.add_option("--eos-delay", options.eos_delay, "End-of-speech message delay in seconds");
  app.add_option("--time-scale", options.time_scale, "Wall seconds per session second");
  app.add_option("--max-wall", options.max_wall_seconds, "Give up after this many wall seconds");
  app.add_option("--readback", options.recognizer.readback, "Recognizer readback in seconds");
  app.add_option("--record", options.recognizer.record_path, "Session record to write");
  app.add_option("--log-dir", options.log_dir, "Result log directory");
  app.add_option("--broker-port", options.broker_port, "Broker port (default: ephemeral)");
  app.add_option("--gateway-port", gateway_port, "Also serve the console gateway on this port");
  app.add_option("--script", script_path, "Interaction script");
  app.add_option("--grammars", grammars, "Grammar directory");
  CLI11_PARSE(app, argc, argv);
  options.gateway_port = gateway_port;

  auto library = std::make_shared<grammar::GrammarLibrary>(grammar::GrammarLibrary::load_directory(grammars));
  auto result = sim::run_live_session(dialogue::DialogueScript::load(script_path), library, options);
  std::cout << "states:";
  for (auto id : result.trace) std::cout << ' ' << dialogue::state_name(id);
  std::cout << '\n';
  for (const auto& r : result.results) {
    decoder::RecognizerEvent e;
    e.kind = decoder::RecognizerEvent::Kind::kResult;
    e.time = r.emitted_at;
    e.result = r;
    std::cout << decoder::strip_wall_clock(decoder::event_to_json(e, "")) << '\n';
  }
  if (!result.finished) std::cerr << "session did not finish within " << options.max_wall_seconds << " s\n";
  return result.finished ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
