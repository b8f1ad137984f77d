#include "robospeech/gateway/protocol.hpp"

#include <nlohmann/json.hpp>

#include "robospeech/dialogue/machine.hpp"
#include "robospeech/segment.hpp"
#include "robospeech/topics.hpp"

namespace robospeech::gateway {

using nlohmann::json;

namespace {

constexpr std::size_t kLanguageLimit = 10000;

json parse_object(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedJson, e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::kMalformedJson, "frame is not a JSON object");
  if (!j.contains("type") || !j["type"].is_string()) {
    throw Error(ErrorCode::kMalformedJson, "frame has no string field 'type'");
  }
  return j;
}

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::kMalformedJson, std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string GatewayEvent::to_json() const {
  json j{{"type", type}, {"t", t}};
  if (type == "asr" || type == "display") j["text"] = text;
  if (type == "state") {
    j["name"] = name;
    j["choices"] = choices;
  }
  if (type == "robot_speech") j["status"] = status;
  return j.dump();
}

GatewayEvent GatewayEvent::from_json(std::string_view text) {
  json j = parse_object(text);
  GatewayEvent e;
  e.type = j["type"].get<std::string>();
  if (!j.contains("t") || !j["t"].is_number()) throw Error(ErrorCode::kMalformedJson, "missing number field 't'");
  e.t = j["t"].get<double>();
  if (e.type == "asr" || e.type == "display") {
    e.text = string_field(j, "text");
  } else if (e.type == "state") {
    e.name = string_field(j, "name");
    try {
      if (j.contains("choices")) e.choices = j["choices"].get<std::vector<std::string>>();
    } catch (const json::exception& ex) {
      throw Error(ErrorCode::kMalformedJson, ex.what());
    }
  } else if (e.type == "robot_speech") {
    e.status = string_field(j, "status");
  } else {
    throw Error(ErrorCode::kUnknownType, "unknown event type '" + e.type + "'");
  }
  return e;
}

const std::vector<std::string>& bridged_topics() {
  static const std::vector<std::string> topics{topics::kSentence, topics::kDialogueState,
                                               topics::kRobotSpeech, topics::kDisplay};
  return topics;
}

GatewayEvent encode_event(const portnet::PortMessage& message) {
  const std::string& topic = message.topic.str();
  GatewayEvent e;
  e.t = message.timestamp;
  if (topic == topics::kSentence) {
    e.type = "asr";
    e.text = message.payload;
  } else if (topic == topics::kDialogueState) {
    e.type = "state";
    e.name = message.payload;
  } else if (topic == topics::kRobotSpeech) {
    e.type = "robot_speech";
    e.status = message.payload;
  } else if (topic == topics::kDisplay) {
    e.type = "display";
    e.text = message.payload;
  } else {
    throw Error(ErrorCode::kUnbridgedTopic, "topic " + topic + " is not bridged");
  }
  return e;
}

std::string OperatorCommand::forward_payload() const {
  return kind == Kind::kAbort ? "abort" : "wizard " + text;
}

OperatorCommand decode_command(std::string_view frame, const grammar::GrammarFst* active) {
  json j = parse_object(frame);
  std::string type = j["type"].get<std::string>();
  if (type == "abort") return {OperatorCommand::Kind::kAbort, {}};
  if (type != "wizard_utterance") throw Error(ErrorCode::kUnknownType, "unknown command type '" + type + "'");
  std::string text = string_field(j, "text");
  if (!active) throw Error(ErrorCode::kNotInGrammar, "no grammar is active");
  auto language = grammar::enumerate_language(*active, kLanguageLimit);
  if (!language.count(text)) {
    throw Error(ErrorCode::kNotInGrammar, "'" + text + "' is not in grammar " + active->grammar_id());
  }
  return {OperatorCommand::Kind::kWizardUtterance, std::move(text)};
}

std::string error_frame(const Error& error) {
  return json{{"type", "error"}, {"code", std::string(to_string(error.code()))}, {"message", error.detail()}}.dump();
}

std::string ack_frame(const OperatorCommand& command) {
  json j{{"type", "ack"},
         {"command", command.kind == OperatorCommand::Kind::kAbort ? "abort" : "wizard_utterance"}};
  if (command.kind == OperatorCommand::Kind::kWizardUtterance) j["text"] = command.text;
  return j.dump();
}

GatewayCore::GatewayCore(std::shared_ptr<const grammar::GrammarLibrary> library,
                         std::optional<dialogue::DialogueScript> script)
    : library_(std::move(library)), script_(std::move(script)) {}

const std::set<std::string>& GatewayCore::language(const std::string& grammar_id) const {
  auto it = languages_.find(grammar_id);
  if (it == languages_.end()) {
    std::set<std::string> sentences;
    if (grammar_id != grammar::kNoGrammar && library_->contains(grammar_id)) {
      sentences = grammar::enumerate_language(*library_->get(grammar_id), kLanguageLimit);
    }
    it = languages_.emplace(grammar_id, std::move(sentences)).first;
  }
  return it->second;
}

std::vector<std::string> GatewayCore::sentences(const std::string& grammar_id) const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> out;
  for (const auto& s : language(grammar_id)) {
    if (s != kSilenceWord) out.push_back(s);
  }
  return out;
}

std::optional<GatewayEvent> GatewayCore::observe(const portnet::PortMessage& message) {
  if (message.topic.str() == topics::kGrammar) {
    std::lock_guard lock(mutex_);
    active_ = message.payload;
    return std::nullopt;
  }
  GatewayEvent e = encode_event(message);
  if (e.type == "state" && script_) {
    if (auto id = dialogue::state_from_name(e.name)) {
      std::string grammar = dialogue::DialogueMachine(*script_).active_grammar(*id);
      e.choices = sentences(grammar);
      std::lock_guard lock(mutex_);
      active_ = grammar;
    }
  }
  return e;
}

OperatorCommand GatewayCore::command(std::string_view frame) const {
  std::string active = active_grammar();
  std::shared_ptr<const grammar::GrammarFst> fst;
  if (active != grammar::kNoGrammar && library_->contains(active)) fst = library_->get(active);
  return decode_command(frame, fst.get());
}

std::string GatewayCore::active_grammar() const {
  std::lock_guard lock(mutex_);
  return active_;
}

}  // namespace robospeech::gateway
