#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "robospeech/dialogue/script.hpp"

namespace robospeech::dialogue {

struct TransitionAction {
  enum class Kind { kSay, kDisplay, kSetGrammar, kStartTimer, kReport, kAbort };

  Kind kind = Kind::kSay;
  std::string text;      // say/display/report text or grammar id
  double seconds = 0.0;  // kStartTimer

  static TransitionAction say(std::string text) { return {Kind::kSay, std::move(text), 0.0}; }
  static TransitionAction display(std::string text) { return {Kind::kDisplay, std::move(text), 0.0}; }
  static TransitionAction set_grammar(std::string id) { return {Kind::kSetGrammar, std::move(id), 0.0}; }
  static TransitionAction start_timer(double seconds) { return {Kind::kStartTimer, {}, seconds}; }
  static TransitionAction report(std::string text) { return {Kind::kReport, std::move(text), 0.0}; }
  static TransitionAction abort() { return {Kind::kAbort, {}, 0.0}; }

  bool operator==(const TransitionAction&) const = default;
};

std::string_view to_string(TransitionAction::Kind kind);

struct DialogueEvent {
  enum class Kind {
    kRecognized,
    kTimeout,
    kRobotSpeechEnded,
    kEnergySessionDone,
    kWizard,
    kOperatorAbort,
  };

  Kind kind = Kind::kRecognized;
  std::string text;    // recognized / wizard
  double joules = 0.0; // energy_session_done

  static DialogueEvent recognized(std::string text) { return {Kind::kRecognized, std::move(text), 0.0}; }
  static DialogueEvent wizard(std::string text) { return {Kind::kWizard, std::move(text), 0.0}; }
  static DialogueEvent timeout() { return {Kind::kTimeout, {}, 0.0}; }
  static DialogueEvent robot_speech_ended() { return {Kind::kRobotSpeechEnded, {}, 0.0}; }
  static DialogueEvent energy_session_done(double joules) { return {Kind::kEnergySessionDone, {}, joules}; }
  static DialogueEvent operator_abort() { return {Kind::kOperatorAbort, {}, 0.0}; }
};

std::string_view to_string(DialogueEvent::Kind kind);

struct DialogueState {
  StateId id = StateId::kIntro;
  double entered_at = 0.0;
  int silent_attempts = 0;  // consecutive failed adaptation attempts
  std::array<double, 4> energies{};
  // Bumped on every transition or re-prompt; timers started under an older
  // epoch are stale.
  std::uint64_t epoch = 0;

  std::string_view name() const { return state_name(id); }
};

struct Transition {
  DialogueState state;
  std::vector<TransitionAction> actions;
};

// The interaction script as a pure transition function.
class DialogueMachine {
 public:
  explicit DialogueMachine(DialogueScript script) : script_(std::move(script)) {}

  const DialogueScript& script() const { return script_; }

  // Intro and its entry actions.
  Transition start(double now) const;

  // Throws Error(kIllegalEvent) for events the state does not accept.
  Transition advance(const DialogueState& state, const DialogueEvent& event, double now) const;

  // Throws Error(kNoSpeechExpected) for states that expect no speech.
  const std::string& grammar_for_state(StateId id) const;

  // Grammar active after entering `id` ("none" when no speech is expected).
  std::string active_grammar(StateId id) const;

 private:
  Transition enter(StateId id, const DialogueState& from, double now,
                   std::vector<TransitionAction> prefix) const;
  Transition handle_answer(const DialogueState& state, const std::string& text, double now) const;

  DialogueScript script_;
};

std::string format_energy(double joules);

}  // namespace robospeech::dialogue
