#pragma once

#include <fstream>
#include <functional>
#include <optional>
#include <string>

#include "robospeech/decoder/recognizer.hpp"

namespace robospeech::decoder {

// One JSON object per event. `wall` (local wall-clock time) is the only
// field that differs between two runs over the same frames.
std::string event_to_json(const RecognizerEvent& event, const std::string& wall);

// Parses a log line; returns the result for `"type":"result"` lines and
// nullopt for the other event types. Throws ParseError(kLogParse).
std::optional<DecodeResult> parse_result_line(const std::string& text, int line_number);

// Removes the `wall` field so logs of two runs can be compared byte-wise.
std::string strip_wall_clock(const std::string& line);

// Appends events to `<dir>/asr-YYYY-MM-DD.jsonl`, the date taken from the
// wall clock when the log is opened.
class ResultLog {
 public:
  using WallClock = std::function<std::string()>;  // ISO-8601 timestamp

  explicit ResultLog(const std::string& dir, WallClock wall = {});

  void write(const RecognizerEvent& event);
  const std::string& path() const { return path_; }

 private:
  WallClock wall_;
  std::string path_;
  std::ofstream out_;
};

std::string iso_wall_clock();

}  // namespace robospeech::decoder
