#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robospeech::dialogue {

enum class StateId {
  kIntro,
  kAdapt1,
  kAdapt2,
  kAdapt3,
  kExerciseIntro,
  kSession1,
  kSession2,
  kSession3,
  kSession4,
  kQuizIntro,
  kQuestion1,
  kQuestion2,
  kQuestion3,
  kQuestion4,
  kCommands1,
  kCommands2,
  kFarewell,
  kAborted,
};

inline constexpr std::size_t kStateCount = 18;

std::string_view state_name(StateId id);
std::optional<StateId> state_from_name(std::string_view name);
// All states in script order (Aborted last).
const std::array<StateId, kStateCount>& all_states();

bool is_adapt(StateId id);
bool is_session(StateId id);
bool is_question(StateId id);
bool is_commands(StateId id);
bool expects_speech(StateId id);
int ordinal(StateId id);  // 1-based index within its group (Adapt2 -> 2)

// Editable wording and answer sets for one state.
struct StateScript {
  std::string say;       // may contain "{energy}"
  std::string display;
  std::string retry;     // re-prompt after silence (adaptation states)
  std::string question;  // quiz states: spoken before the choices
  std::string grammar;   // grammar id; empty when no speech is expected
  std::vector<std::string> choices;  // presentation order
  std::vector<std::string> correct;
  std::map<std::string, std::string> acks;
  double seconds = 0.0;  // exercise duration
};

class DialogueScript {
 public:
  // Throws Error(kMalformedJson) or Error(kInvalidArgument) for missing
  // states or fields.
  static DialogueScript parse(const std::string& json_text);
  static DialogueScript load(const std::string& path);

  const StateScript& state(StateId id) const { return states_.at(static_cast<std::size_t>(id)); }
  double response_timeout() const { return response_timeout_; }
  int adapt_silence_limit() const { return adapt_silence_limit_; }

  // Distinct expected child phrases over all states, in script order.
  std::vector<std::string> expected_phrases() const;
  // Multiple-choice phrases only (questions and commands).
  std::vector<std::string> multiple_choice_phrases() const;

 private:
  std::array<StateScript, kStateCount> states_;
  double response_timeout_ = 11.0;
  int adapt_silence_limit_ = 3;
};

}  // namespace robospeech::dialogue
