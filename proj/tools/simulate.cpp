#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/decoder/result_log.hpp"
#include "robospeech/eval/report.hpp"
#include "robospeech/sim/live_child.hpp"
#include "robospeech/sim/runner.hpp"
#include "robospeech/sim/session.hpp"
#include "robospeech/sim/timeline_io.hpp"

using namespace robospeech;
namespace fs = std::filesystem;

namespace {

void spit(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(ErrorCode::kMissingFile, "cannot write " + path.string());
}

int run(int argc, char** argv) {
  CLI::App app{"Generate a synthetic child-robot session"};
  sim::SessionConfig config;
  std::string eos = "uniform:0.3,0.7", out_dir = "session";
  std::string script_path = tools::data_path("healthy_living.json"), grammars = tools::data_path("grammars");
  bool live = false;
  double time_scale = 1.0;
  std::optional<std::uint16_t> broker_port;
  app.add_option("--seed", config.seed, "Random seed");
  app.add_option("--confusion", config.confusion, "Confusion probability p in [0,1)");
  app.add_option("--eos-delay", eos, "fixed:D or uniform:A,B seconds");
  app.add_option("--disfluency", config.disfluency, "Probability an answer is disfluent");
  app.add_option("--frames-per-word", config.frames_per_word, "Speaking rate");
  app.add_option("--no-answer", config.no_answer, "Probability the child stays silent");
  app.add_option("--age", config.age_tag, "Participant age tag (metadata)");
  app.add_option("--fluency", config.fluency_tag, "Participant fluency tag (metadata)");
  app.add_option("--readback", config.recognizer.readback, "Recognizer readback in seconds");
  app.add_option("--tolerance", config.tolerance, "Start/end tolerance for oracle labels");
  app.add_option("--script", script_path, "Interaction script");
  app.add_option("--grammars", grammars, "Grammar directory");
  app.add_option("--out", out_dir, "Output directory");
  app.add_flag("--live", live, "Play the child against a running broker instead");
  app.add_option("--time-scale", time_scale, "Live mode: wall seconds per session second");
  app.add_option("--broker-port", broker_port, "Live mode: broker port");
  CLI11_PARSE(app, argc, argv);

  config.eos_delay = sim::EosDelay::parse(eos);
  auto script = dialogue::DialogueScript::load(script_path);
  auto library = grammar::GrammarLibrary::load_directory(grammars);

  if (live) {
    sim::LiveChildOptions options;
    options.broker = tools::broker_endpoint(broker_port);
    options.seed = config.seed;
    options.confusion = config.confusion;
    options.frames_per_word = config.frames_per_word;
    options.time_scale = time_scale;
    sim::LiveChild child(script, library, options);
    tools::install_stop_handler();
    std::thread watcher([&child] {
      while (!tools::stop_flag()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      child.stop();
    });
    child.run();
    tools::stop_flag() = true;
    watcher.join();
    for (const auto& phrase : child.spoken()) std::cout << phrase << '\n';
    return 0;
  }

  dialogue::DialogueMachine machine(script);
  auto run = sim::generate_session(config, machine, library);

  fs::path out(out_dir);
  fs::create_directories(out / "logs");
  sim::write_timeline((out / "timeline.jsonl").string(), run.timeline);
  sim::write_gold((out / "gold.tsv").string(), run.gold);
  spit(out / "oracle.tsv", sim::write_oracle_tsv(run.gold));
  {
    decoder::ResultLog log((out / "logs").string());
    for (const auto& e : run.events) log.write(e);
  }
  auto report = sim::evaluate_session(run.gold, run.results, eval::options_from_script(script));
  spit(out / "report.json", report.to_json() + "\n");

  std::cout << "states:";
  for (auto id : run.trace) std::cout << ' ' << dialogue::state_name(id);
  std::cout << "\nsession " << run.duration << " s, " << run.gold.segments.size() << " child utterances, "
            << run.results.size() << " results\n\n"
            << report.to_table();
  for (const auto& e : run.illegal_events) std::cerr << "illegal event: " << e << '\n';
  return run.illegal_events.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
