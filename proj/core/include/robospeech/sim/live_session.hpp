#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/dialogue/script.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/grammar/library.hpp"

namespace robospeech::sim {

struct LiveSessionOptions {
  std::uint64_t seed = 1;
  double confusion = 0.0;
  double eos_delay = 0.0;
  double time_scale = 0.05;           // wall seconds per session second
  double max_wall_seconds = 60.0;
  decoder::RecognizerConfig recognizer;  // record_path enables recording
  std::string log_dir;                // result log, empty = none
  std::optional<std::uint16_t> broker_port;   // empty = ephemeral in-process broker
  std::optional<std::uint16_t> gateway_port;  // empty = no gateway
};

struct LiveSessionResult {
  std::vector<dialogue::StateId> trace;
  std::vector<decoder::DecodeResult> results;
  std::vector<std::string> spoken;    // child phrases
  std::vector<eval::GoldEntry> gold;  // as played by the simulated child
  bool finished = false;              // reached Farewell or Aborted in time
};

// The whole stack over a real in-process broker, each node on its own
// thread: recognizer fed by /Audio/Frames, dialogue node playing the robot,
// simulated child, and optionally the console gateway.
LiveSessionResult run_live_session(const dialogue::DialogueScript& script,
                                   std::shared_ptr<const grammar::GrammarLibrary> library,
                                   const LiveSessionOptions& options);

}  // namespace robospeech::sim
