#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/decoder/node.hpp"
#include "robospeech/decoder/result_log.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/topics.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Grammar-constrained online recognizer"};
  std::string file, grammars = tools::data_path("grammars"), log_dir, record, initial;
  bool live = false, quiet = false;
  std::optional<std::uint16_t> broker_port;
  decoder::RecognizerConfig config;
  auto* source = app.add_option("--file", file, "Replay a session record instead of listening live");
  app.add_flag("--live", live, "Read frames and control events from the broker")->excludes(source);
  app.add_option("--grammars", grammars, "Directory of .gram files");
  app.add_option("--grammar", initial, "Grammar active from the start");
  app.add_option("--log-dir", log_dir, "Append result events to <dir>/asr-YYYY-MM-DD.jsonl");
  app.add_option("--record", record, "Write a session record (live mode)");
  app.add_option("--readback", config.readback, "Seconds rewound when the robot stops speaking");
  app.add_option("--endpoint-frames", config.endpoint_frames, "Stable frames for an early endpoint");
  app.add_option("--timeout", config.utterance_timeout, "Utterance timeout in seconds");
  app.add_option("--beam", config.beam, "Search states kept per frame (0 = unlimited)");
  app.add_option("--broker-port", broker_port, "Broker port");
  app.add_flag("--quiet", quiet, "Do not print results");
  CLI11_PARSE(app, argc, argv);
  if (file.empty() && !live) throw Error(ErrorCode::kInvalidArgument, "give --file <record> or --live");

  config.source = live ? decoder::SourceKind::kLive : decoder::SourceKind::kFile;
  if (live) config.record_path = record;
  config.validate();
  auto library = grammar::GrammarLibrary::load_directory(grammars);
  decoder::Recognizer recognizer(config);

  std::unique_ptr<decoder::ResultLog> log;
  if (!log_dir.empty()) {
    log = std::make_unique<decoder::ResultLog>(log_dir);
    recognizer.add_sink([&log](const decoder::RecognizerEvent& e) { log->write(e); });
  }
  auto endpoint = tools::broker_endpoint(broker_port);
  if (live) {
    auto port = std::make_shared<portnet::Port>(
        portnet::Port::open(endpoint, topics::kSentence, portnet::Direction::kOut));
    recognizer.add_sink(decoder::sentence_publisher(port));
  }
  if (!quiet) {
    recognizer.add_sink([](const decoder::RecognizerEvent& e) {
      if (e.kind == decoder::RecognizerEvent::Kind::kResult) {
        std::cout << decoder::strip_wall_clock(decoder::event_to_json(e, "")) << std::endl;
      }
    });
  }
  if (!initial.empty()) recognizer.set_grammar(library.get(initial));

  tools::install_stop_handler();
  auto frames = decoder::select_source(config.source, file, endpoint);
  decoder::GrammarResolver resolve = [&library](const std::string& id) { return library.get(id); };
  auto results = decoder::run_source(*frames, recognizer, resolve, &tools::stop_flag());
  std::cerr << results.size() << " results\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
