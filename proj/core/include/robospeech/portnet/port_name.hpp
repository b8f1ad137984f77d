#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace robospeech::portnet {

// Slash-separated port path such as "/SpeechRecognition/Sentence".
class PortName {
 public:
  // Throws Error(kInvalidName) unless the path starts with '/', has no empty
  // segments and contains no whitespace.
  static PortName parse(std::string_view path);
  static bool is_valid(std::string_view path);

  const std::string& str() const noexcept { return path_; }

  bool operator==(const PortName&) const = default;
  auto operator<=>(const PortName&) const = default;

 private:
  explicit PortName(std::string path) : path_(std::move(path)) {}
  std::string path_;
};

struct PortMessage {
  PortName topic;
  double timestamp = 0.0;  // seconds since session start
  std::string payload;     // UTF-8, never contains '\n'
};

// Wire framing: `<topic> <timestamp> <payload>` without the trailing newline.
std::string encode_line(const PortMessage& message);
std::optional<PortMessage> decode_line(std::string_view line);

// Shortest decimal text that round-trips to the same double.
std::string format_timestamp(double seconds);

}  // namespace robospeech::portnet
