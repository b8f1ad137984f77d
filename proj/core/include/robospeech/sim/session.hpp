#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/decoder/session_record.hpp"
#include "robospeech/dialogue/machine.hpp"
#include "robospeech/eval/matching.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/grammar/library.hpp"

namespace robospeech::sim {

// End-of-speech message delay: fixed(d) or uniform(a, b) seconds.
struct EosDelay {
  enum class Kind { kFixed, kUniform };

  Kind kind = Kind::kUniform;
  double a = 0.3;
  double b = 0.7;

  static EosDelay fixed(double d) { return {Kind::kFixed, d, d}; }
  static EosDelay uniform(double a, double b) { return {Kind::kUniform, a, b}; }

  // Throws Error(kInvalidArgument) for negative or reversed bounds.
  void validate() const;
  std::string describe() const;
  // "fixed:0.5" | "uniform:0.3,0.7"
  static EosDelay parse(const std::string& text);
};

// The k-th seeded draw; pure in (distribution, seed, k).
double eos_delay_sample(const EosDelay& delay, std::uint64_t seed, std::uint64_t k);

struct SessionConfig {
  std::uint64_t seed = 1;
  double confusion = 0.0;          // p in [0, 1)
  EosDelay eos_delay;
  double disfluency = 0.0;         // per-utterance probability
  int frames_per_word = 30;
  double no_answer = 0.0;          // per-turn probability the child stays silent
  std::string age_tag = "unknown";
  std::string fluency_tag = "unknown";

  double response_gap = 0.0;       // child onset after the robot really stops
  double reaction = 0.2;           // dialogue action -> robot starts speaking
  double linger = 1.0;             // recording kept after the final turn
  double max_duration = 1800.0;    // hard stop, seconds
  double arm_mass = 2.0;           // kg, for the energy stub
  double tolerance = eval::kDefaultTolerance;  // used for the oracle labels
  decoder::RecognizerConfig recognizer;

  // Throws Error(kInvalidArgument).
  void validate() const;
};

inline constexpr const char* kChildSpeaker = "child";

struct GoldSegment {
  UtteranceSegment segment;  // transcription with markers
  dialogue::StateId state = dialogue::StateId::kIntro;
  eval::Fluency fluency = eval::Fluency::kFluent;
  bool expected = true;
  std::string intended;      // the phrase the child meant
  // Start labels follow from the window the recognizer opens for this
  // answer (readback versus message delay, counted in frames); ends are
  // taken as aligned, which holds while the clipped onset is shorter than
  // the first word.
  eval::SegmentationErrorLabel oracle;
};

struct GoldAnnotation {
  std::vector<GoldSegment> segments;       // child, time-ordered
  std::vector<eval::GoldEntry> robot;      // robot turns, time-ordered

  // Child and robot rows merged by start time, as written to the TSV.
  std::vector<eval::GoldEntry> entries() const;
};

struct SessionRun {
  std::vector<decoder::RecordEntry> timeline;  // what the recognizer consumed, plus bookkeeping
  GoldAnnotation gold;
  std::vector<decoder::DecodeResult> results;
  std::vector<decoder::RecognizerEvent> events;
  std::vector<dialogue::StateId> trace;        // states entered, Intro first
  std::vector<std::vector<dialogue::TransitionAction>> actions;
  dialogue::DialogueState final_state;
  std::vector<std::string> illegal_events;
  double duration = 0.0;
};

// Runs one full scripted session in virtual time: the real recognizer and
// dialogue machine are driven frame by frame while the simulator plays the
// child (answers drawn from each state's choices, optionally disfluent and
// corrupted) and the robot (turns of word-count / 2.5 seconds, followed by a
// delayed end-of-speech message). If config.recognizer.record_path is set
// the recognizer also writes its own session record there.
SessionRun generate_session(const SessionConfig& config, const dialogue::DialogueMachine& machine,
                            const grammar::GrammarLibrary& library);

// Sessions need a grammar for every speech-expecting state.
void check_library(const dialogue::DialogueScript& script, const grammar::GrammarLibrary& library);

}  // namespace robospeech::sim
