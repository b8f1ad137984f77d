#include "robospeech/sim/live_session.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "robospeech/decoder/node.hpp"
#include "robospeech/decoder/result_log.hpp"
#include "robospeech/dialogue/node.hpp"
#include "robospeech/gateway/server.hpp"
#include "robospeech/portnet/broker.hpp"
#include "robospeech/sim/live_child.hpp"
#include "robospeech/topics.hpp"

namespace robospeech::sim {

LiveSessionResult run_live_session(const dialogue::DialogueScript& script,
                                   std::shared_ptr<const grammar::GrammarLibrary> library,
                                   const LiveSessionOptions& options) {
  portnet::BrokerOptions broker_options;
  broker_options.port = options.broker_port.value_or(0);
  portnet::Broker broker(broker_options);
  broker.start();
  portnet::Endpoint endpoint;
  endpoint.port = broker.port();

  decoder::RecognizerConfig config = options.recognizer;
  config.source = decoder::SourceKind::kLive;
  decoder::Recognizer recognizer(config);
  std::unique_ptr<decoder::ResultLog> log;
  if (!options.log_dir.empty()) {
    log = std::make_unique<decoder::ResultLog>(options.log_dir);
    recognizer.add_sink([&log](const decoder::RecognizerEvent& e) { log->write(e); });
  }
  auto sentence = std::make_shared<portnet::Port>(
      portnet::Port::open(endpoint, topics::kSentence, portnet::Direction::kOut));
  recognizer.add_sink(decoder::sentence_publisher(sentence));

  std::unique_ptr<gateway::GatewayServer> gateway;
  if (options.gateway_port) {
    gateway::GatewayOptions gateway_options;
    gateway_options.broker = endpoint;
    gateway_options.port = *options.gateway_port;
    gateway = std::make_unique<gateway::GatewayServer>(
        std::make_shared<gateway::GatewayCore>(library, script), gateway_options);
    gateway->start();
  }

  decoder::LiveSource source(endpoint);
  dialogue::DialogueNodeOptions node_options;
  node_options.broker = endpoint;
  node_options.eos_delay = options.eos_delay;
  node_options.time_scale = options.time_scale;
  dialogue::DialogueNode node{dialogue::DialogueMachine(script), node_options};

  LiveChildOptions child_options;
  child_options.broker = endpoint;
  child_options.seed = options.seed;
  child_options.confusion = options.confusion;
  child_options.time_scale = options.time_scale;
  child_options.frame_rate = config.frame_rate;
  LiveChild child(script, *library, child_options);

  std::atomic<bool> stop{false};
  std::vector<decoder::DecodeResult> results;
  decoder::GrammarResolver resolve = [&library](const std::string& id) { return library->get(id); };
  std::thread recognizer_thread([&] { results = decoder::run_source(source, recognizer, resolve, &stop); });
  std::thread child_thread([&child] { child.run(); });
  std::atomic<bool> done{false};
  std::thread node_thread([&] {
    node.run();
    done = true;
  });

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(options.max_wall_seconds));
  while (!done && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  LiveSessionResult out;
  out.finished = done;
  node.stop();
  node_thread.join();
  child.stop();
  child_thread.join();
  // Let queued frames drain before the recognizer stops.
  std::this_thread::sleep_for(std::chrono::milliseconds(200));
  stop = true;
  source.stop();
  recognizer_thread.join();
  if (gateway) gateway->stop();
  broker.stop();

  out.trace = node.trace();
  out.results = std::move(results);
  out.spoken = child.spoken();
  out.gold = child.gold();
  return out;
}

}  // namespace robospeech::sim
