#include "robospeech/dialogue/script.hpp"

#include <algorithm>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "robospeech/error.hpp"

namespace robospeech::dialogue {
namespace {

constexpr std::array<std::string_view, kStateCount> kNames = {
    "Intro",     "Adapt1",    "Adapt2",    "Adapt3",    "ExerciseIntro", "Session1",
    "Session2",  "Session3",  "Session4",  "QuizIntro", "Question1",     "Question2",
    "Question3", "Question4", "Commands1", "Commands2", "Farewell",      "Aborted"};

}  // namespace

std::string_view state_name(StateId id) { return kNames.at(static_cast<std::size_t>(id)); }

std::optional<StateId> state_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<StateId>(i);
  }
  return std::nullopt;
}

const std::array<StateId, kStateCount>& all_states() {
  static const std::array<StateId, kStateCount> states = [] {
    std::array<StateId, kStateCount> out{};
    for (std::size_t i = 0; i < kStateCount; ++i) out[i] = static_cast<StateId>(i);
    return out;
  }();
  return states;
}

bool is_adapt(StateId id) { return id >= StateId::kAdapt1 && id <= StateId::kAdapt3; }
bool is_session(StateId id) { return id >= StateId::kSession1 && id <= StateId::kSession4; }
bool is_question(StateId id) { return id >= StateId::kQuestion1 && id <= StateId::kQuestion4; }
bool is_commands(StateId id) { return id == StateId::kCommands1 || id == StateId::kCommands2; }

bool expects_speech(StateId id) {
  return is_adapt(id) || is_question(id) || is_commands(id) || id == StateId::kQuizIntro;
}

int ordinal(StateId id) {
  auto i = static_cast<int>(id);
  if (is_adapt(id)) return i - static_cast<int>(StateId::kAdapt1) + 1;
  if (is_session(id)) return i - static_cast<int>(StateId::kSession1) + 1;
  if (is_question(id)) return i - static_cast<int>(StateId::kQuestion1) + 1;
  if (is_commands(id)) return i - static_cast<int>(StateId::kCommands1) + 1;
  return 1;
}

DialogueScript DialogueScript::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  DialogueScript script;
  try {
    script.response_timeout_ = j.value("response_timeout", 11.0);
    script.adapt_silence_limit_ = j.value("adapt_silence_limit", 3);
    const auto& states = j.at("states");
    for (StateId id : all_states()) {
      std::string name(state_name(id));
      if (!states.contains(name)) throw Error(ErrorCode::kInvalidArgument, "script lacks state " + name);
      const auto& s = states.at(name);
      StateScript& out = script.states_[static_cast<std::size_t>(id)];
      out.say = s.value("say", "");
      out.display = s.value("display", "");
      out.retry = s.value("retry", "");
      out.question = s.value("question", "");
      out.grammar = s.value("grammar", "");
      out.choices = s.value("choices", std::vector<std::string>{});
      out.correct = s.value("correct", std::vector<std::string>{});
      out.acks = s.value("acks", std::map<std::string, std::string>{});
      out.seconds = s.value("seconds", 0.0);
      if (expects_speech(id) && (out.grammar.empty() || out.choices.empty())) {
        throw Error(ErrorCode::kInvalidArgument, name + " expects speech but has no grammar/choices");
      }
      if (!expects_speech(id) && !out.grammar.empty()) {
        throw Error(ErrorCode::kInvalidArgument, name + " expects no speech but names a grammar");
      }
      if (is_question(id) && out.question.empty()) {
        throw Error(ErrorCode::kInvalidArgument, name + " has no question");
      }
      if (is_session(id) && !(out.seconds > 0.0)) {
        throw Error(ErrorCode::kInvalidArgument, name + " needs a positive duration");
      }
      for (const auto& c : out.correct) {
        if (std::find(out.choices.begin(), out.choices.end(), c) == out.choices.end()) {
          throw Error(ErrorCode::kInvalidArgument, name + ": correct answer not a choice: " + c);
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  return script;
}

DialogueScript DialogueScript::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot read script " + path);
  std::stringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::vector<std::string> DialogueScript::expected_phrases() const {
  std::vector<std::string> out;
  for (const auto& s : states_) {
    for (const auto& c : s.choices) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

std::vector<std::string> DialogueScript::multiple_choice_phrases() const {
  std::vector<std::string> out;
  for (StateId id : all_states()) {
    if (!is_question(id) && !is_commands(id)) continue;
    for (const auto& c : state(id).choices) {
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
  }
  return out;
}

}  // namespace robospeech::dialogue
