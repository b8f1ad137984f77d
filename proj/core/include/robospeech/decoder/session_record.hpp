#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "robospeech/decoder/frame.hpp"

namespace robospeech::decoder {

struct GateEvent {
  bool robot_speaking = false;
  double at = 0.0;
  bool operator==(const GateEvent&) const = default;
};

struct GrammarEvent {
  std::string id;  // "none" switches recognition off
  bool operator==(const GrammarEvent&) const = default;
};

// Any other `{"ev": ...}` line (e.g. simulator bookkeeping); kept verbatim
// and ignored by the recognizer.
struct ExtraEvent {
  std::string kind;
  std::string json;
  bool operator==(const ExtraEvent&) const = default;
};

using RecordEntry = std::variant<ObservationFrame, GateEvent, GrammarEvent, ExtraEvent>;

std::string record_line(const RecordEntry& entry);
// Throws ParseError(kMalformedRecord) carrying `line_number`.
RecordEntry parse_record_line(const std::string& text, int line_number);

// Throws Error(kMissingFile) or ParseError(kMalformedRecord).
std::vector<RecordEntry> read_session_record(const std::string& path);

// Appends record lines to a file, flushing after each gate/grammar event.
class SessionRecorder {
 public:
  explicit SessionRecorder(const std::string& path);

  void write(const RecordEntry& entry);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

}  // namespace robospeech::decoder
