#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "robospeech/dialogue/script.hpp"
#include "robospeech/error.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/portnet/port_name.hpp"

namespace robospeech::gateway {

inline constexpr std::uint16_t kDefaultPort = 7602;

// One console-bound frame. Fields beyond `type` and `t` depend on the type:
// asr/display carry text, state carries name and choices, robot_speech
// carries status.
struct GatewayEvent {
  std::string type;  // asr | state | robot_speech | display
  double t = 0.0;
  std::string text;
  std::string name;
  std::string status;
  std::vector<std::string> choices;

  std::string to_json() const;
  // Throws Error(kMalformedJson) or Error(kUnknownType).
  static GatewayEvent from_json(std::string_view text);

  bool operator==(const GatewayEvent&) const = default;
};

// Topics forwarded to consoles.
const std::vector<std::string>& bridged_topics();

// Lossless topic -> type mapping; `choices` is left empty. Throws
// Error(kUnbridgedTopic) for other topics.
GatewayEvent encode_event(const portnet::PortMessage& message);

struct OperatorCommand {
  enum class Kind { kWizardUtterance, kAbort };

  Kind kind = Kind::kAbort;
  std::string text;

  // Payload for /Operator/Command.
  std::string forward_payload() const;

  bool operator==(const OperatorCommand&) const = default;
};

// Parses a console frame. Wizard text must be a sentence of `active`
// (nullptr = no grammar active). Throws Error(kMalformedJson),
// Error(kUnknownType) or Error(kNotInGrammar).
OperatorCommand decode_command(std::string_view frame, const grammar::GrammarFst* active);

// {"type":"error","code":...,"message":...}
std::string error_frame(const Error& error);
// {"type":"ack","command":...,"text":...}
std::string ack_frame(const OperatorCommand& command);

// Transport-independent gateway state: follows the dialogue's active grammar
// and turns portnet traffic into console frames and console frames into
// operator commands. Thread-safe.
class GatewayCore {
 public:
  GatewayCore(std::shared_ptr<const grammar::GrammarLibrary> library,
              std::optional<dialogue::DialogueScript> script);

  // Bridged topics yield an event (state events list the answer choices of
  // the state's grammar). /Dialogue/Grammar updates the active grammar and
  // yields nothing. Other topics throw Error(kUnbridgedTopic).
  std::optional<GatewayEvent> observe(const portnet::PortMessage& message);

  OperatorCommand command(std::string_view frame) const;

  std::string active_grammar() const;
  // Sentences of a grammar without "!SIL", sorted; empty for "none".
  std::vector<std::string> sentences(const std::string& grammar_id) const;

 private:
  const std::set<std::string>& language(const std::string& grammar_id) const;

  std::shared_ptr<const grammar::GrammarLibrary> library_;
  std::optional<dialogue::DialogueScript> script_;
  mutable std::mutex mutex_;
  std::string active_ = grammar::kNoGrammar;
  mutable std::map<std::string, std::set<std::string>> languages_;
};

}  // namespace robospeech::gateway
