#include "robospeech/dialogue/machine.hpp"

#include <algorithm>
#include <cstdio>

#include "robospeech/error.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::dialogue {
namespace {

std::string join(const std::vector<std::string>& items, const std::string& sep) {
  std::string out;
  for (const auto& item : items) {
    if (!out.empty()) out += sep;
    out += item;
  }
  return out;
}

std::string fill_energy(std::string text, double joules) {
  auto pos = text.find("{energy}");
  if (pos != std::string::npos) text.replace(pos, 8, format_energy(joules));
  return text;
}

bool contains(const std::vector<std::string>& items, const std::string& text) {
  return std::find(items.begin(), items.end(), text) != items.end();
}

StateId next_of(StateId id) { return static_cast<StateId>(static_cast<int>(id) + 1); }

[[noreturn]] void illegal(const DialogueState& state, const DialogueEvent& event) {
  throw Error(ErrorCode::kIllegalEvent, std::string(to_string(event.kind)) + " in state " +
                                            std::string(state.name()));
}

}  // namespace

std::string format_energy(double joules) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.1f", joules);
  return buffer;
}

std::string_view to_string(TransitionAction::Kind kind) {
  switch (kind) {
    case TransitionAction::Kind::kSay: return "say";
    case TransitionAction::Kind::kDisplay: return "display";
    case TransitionAction::Kind::kSetGrammar: return "set_grammar";
    case TransitionAction::Kind::kStartTimer: return "start_timer";
    case TransitionAction::Kind::kReport: return "report";
    case TransitionAction::Kind::kAbort: return "abort";
  }
  return "?";
}

std::string_view to_string(DialogueEvent::Kind kind) {
  switch (kind) {
    case DialogueEvent::Kind::kRecognized: return "recognized";
    case DialogueEvent::Kind::kTimeout: return "timeout";
    case DialogueEvent::Kind::kRobotSpeechEnded: return "robot_speech_ended";
    case DialogueEvent::Kind::kEnergySessionDone: return "energy_session_done";
    case DialogueEvent::Kind::kWizard: return "wizard";
    case DialogueEvent::Kind::kOperatorAbort: return "operator_abort";
  }
  return "?";
}

const std::string& DialogueMachine::grammar_for_state(StateId id) const {
  if (!expects_speech(id)) {
    throw Error(ErrorCode::kNoSpeechExpected, std::string(state_name(id)) + " expects no speech");
  }
  return script_.state(id).grammar;
}

std::string DialogueMachine::active_grammar(StateId id) const {
  return expects_speech(id) ? script_.state(id).grammar : std::string(grammar::kNoGrammar);
}

Transition DialogueMachine::start(double now) const {
  return enter(StateId::kIntro, DialogueState{}, now, {});
}

Transition DialogueMachine::enter(StateId id, const DialogueState& from, double now,
                                  std::vector<TransitionAction> prefix) const {
  Transition t;
  t.state = from;
  t.state.id = id;
  t.state.entered_at = now;
  t.state.silent_attempts = 0;
  t.state.epoch = from.epoch + 1;
  auto& actions = t.actions;
  const StateScript& s = script_.state(id);
  const std::string grammar_id = active_grammar(id);
  auto speak = [&](const std::string& say, const std::string& display) {
    actions.push_back(TransitionAction::set_grammar(grammar_id));
    // Acknowledgements queued by the previous state follow the grammar switch.
    for (auto& a : prefix) actions.push_back(std::move(a));
    prefix.clear();
    actions.push_back(TransitionAction::say(say));
    actions.push_back(TransitionAction::display(display.empty() ? say : display));
  };

  if (id == StateId::kSession1) {
    for (auto& a : prefix) actions.push_back(std::move(a));
    actions.push_back(TransitionAction::display(s.display));
    actions.push_back(TransitionAction::report("session1 start"));
    return t;
  }
  if (is_session(id)) {
    speak(fill_energy(s.say, from.energies[static_cast<std::size_t>(ordinal(id) - 2)]), s.display);
  } else if (id == StateId::kQuizIntro) {
    speak(fill_energy(s.say, from.energies[3]), s.display);
  } else if (is_question(id)) {
    speak(s.question + " " + join(s.choices, ", ") + ".", s.question + " | " + join(s.choices, " | "));
  } else if (is_commands(id)) {
    speak(s.say + " " + join(s.choices, ", ") + ".", join(s.choices, " | "));
  } else if (id == StateId::kAborted) {
    actions.push_back(TransitionAction::set_grammar(grammar_id));
    actions.push_back(TransitionAction::abort());
    actions.push_back(TransitionAction::say(s.say));
    actions.push_back(TransitionAction::display(s.display.empty() ? s.say : s.display));
  } else {
    speak(s.say, s.display);
  }
  return t;
}

Transition DialogueMachine::handle_answer(const DialogueState& state, const std::string& text,
                                          double now) const {
  const StateId id = state.id;
  const StateScript& s = script_.state(id);
  const bool silent = text.empty() || text == kSilenceWord;
  const bool chosen = !silent && contains(s.choices, text);

  if (is_adapt(id)) {
    if (chosen) return enter(next_of(id), state, now, {});
    Transition t;
    t.state = state;
    t.state.silent_attempts = state.silent_attempts + 1;
    t.state.epoch = state.epoch + 1;
    if (t.state.silent_attempts >= script_.adapt_silence_limit()) {
      Transition aborted = enter(StateId::kAborted, t.state, now, {});
      aborted.actions.insert(aborted.actions.begin(),
                             TransitionAction::report("adaptation failed " +
                                                      std::to_string(t.state.silent_attempts) + " times"));
      return aborted;
    }
    t.actions.push_back(TransitionAction::set_grammar(s.grammar));
    t.actions.push_back(TransitionAction::say(s.retry.empty() ? s.say : s.retry));
    t.actions.push_back(TransitionAction::display(s.display.empty() ? s.say : s.display));
    return t;
  }
  if (id == StateId::kQuizIntro) return enter(StateId::kQuestion1, state, now, {});

  if (is_question(id)) {
    std::vector<TransitionAction> prefix;
    std::string tag = "q" + std::to_string(ordinal(id));
    if (chosen) {
      bool right = contains(s.correct, text);
      prefix.push_back(TransitionAction::report(tag + (right ? " correct: " : " wrong: ") + text));
      prefix.push_back(TransitionAction::display(right ? "Correct: " + text
                                                       : "Wrong: " + text + " | Answer: " + join(s.correct, " / ")));
    } else {
      prefix.push_back(TransitionAction::report(tag + " no answer"));
      prefix.push_back(TransitionAction::display("Answer: " + join(s.correct, " / ")));
    }
    Transition t = enter(next_of(id), state, now, {});
    t.actions.insert(t.actions.begin(), prefix.begin(), prefix.end());
    return t;
  }

  // Commands: acknowledge a chosen command, then move on either way.
  std::vector<TransitionAction> prefix;
  if (chosen) {
    auto ack = s.acks.find(text);
    prefix.push_back(TransitionAction::say(ack != s.acks.end() ? ack->second : "ok i will " + text));
    prefix.push_back(TransitionAction::report("command: " + text));
  } else {
    prefix.push_back(TransitionAction::report("command: none"));
  }
  return enter(next_of(id), state, now, std::move(prefix));
}

Transition DialogueMachine::advance(const DialogueState& state, const DialogueEvent& event,
                                    double now) const {
  const StateId id = state.id;
  switch (event.kind) {
    case DialogueEvent::Kind::kOperatorAbort:
      if (id == StateId::kAborted) return {state, {}};
      return enter(StateId::kAborted, state, now, {});

    case DialogueEvent::Kind::kRobotSpeechEnded: {
      Transition t{state, {}};
      if (id == StateId::kIntro) return enter(StateId::kAdapt1, state, now, {});
      if (id == StateId::kExerciseIntro) return enter(StateId::kSession1, state, now, {});
      if (expects_speech(id)) {
        t.actions.push_back(TransitionAction::start_timer(script_.response_timeout()));
      } else if (is_session(id) && id != StateId::kSession1) {
        t.actions.push_back(TransitionAction::report("session" + std::to_string(ordinal(id)) + " start"));
      }
      return t;
    }

    case DialogueEvent::Kind::kEnergySessionDone: {
      if (!is_session(id)) illegal(state, event);
      if (!(event.joules >= 0.0)) throw Error(ErrorCode::kNegativeInput, "negative energy");
      DialogueState s = state;
      int k = ordinal(id);
      s.energies[static_cast<std::size_t>(k - 1)] = event.joules;
      std::vector<TransitionAction> prefix{
          TransitionAction::report("session" + std::to_string(k) + " energy " + format_energy(event.joules))};
      Transition t = enter(next_of(id), s, now, {});
      t.actions.insert(t.actions.begin(), prefix.begin(), prefix.end());
      return t;
    }

    case DialogueEvent::Kind::kTimeout:
      if (!expects_speech(id)) illegal(state, event);
      return handle_answer(state, "", now);

    case DialogueEvent::Kind::kRecognized:
    case DialogueEvent::Kind::kWizard:
      if (!expects_speech(id)) illegal(state, event);
      return handle_answer(state, event.text, now);
  }
  illegal(state, event);
}

}  // namespace robospeech::dialogue
