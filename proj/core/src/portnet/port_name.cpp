#include "robospeech/portnet/port_name.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "robospeech/error.hpp"

namespace robospeech::portnet {

bool PortName::is_valid(std::string_view path) {
  if (path.size() < 2 || path.front() != '/' || path.back() == '/') return false;
  char previous = '\0';
  for (char c : path) {
    if (std::isspace(static_cast<unsigned char>(c)) || std::iscntrl(static_cast<unsigned char>(c)))
      return false;
    if (c == '/' && previous == '/') return false;
    previous = c;
  }
  return true;
}

PortName PortName::parse(std::string_view path) {
  if (!is_valid(path)) {
    throw Error(ErrorCode::kInvalidName, "bad port name '" + std::string(path) + "'");
  }
  return PortName(std::string(path));
}

std::string format_timestamp(double seconds) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), seconds);
  if (ec != std::errc()) return "0";
  return std::string(buffer, end);
}

std::string encode_line(const PortMessage& message) {
  std::string line = message.topic.str();
  line += ' ';
  line += format_timestamp(message.timestamp);
  line += ' ';
  line += message.payload;
  return line;
}

std::optional<PortMessage> decode_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto first = line.find(' ');
  if (first == std::string_view::npos) return std::nullopt;
  std::string_view topic = line.substr(0, first);
  if (!PortName::is_valid(topic)) return std::nullopt;
  std::string_view rest = line.substr(first + 1);
  auto second = rest.find(' ');
  std::string_view stamp = rest.substr(0, second);
  std::string_view payload =
      second == std::string_view::npos ? std::string_view() : rest.substr(second + 1);
  double timestamp = 0.0;
  auto [ptr, ec] = std::from_chars(stamp.data(), stamp.data() + stamp.size(), timestamp);
  if (ec != std::errc() || ptr != stamp.data() + stamp.size() || !std::isfinite(timestamp)) {
    return std::nullopt;
  }
  return PortMessage{PortName::parse(topic), timestamp, std::string(payload)};
}

}  // namespace robospeech::portnet
