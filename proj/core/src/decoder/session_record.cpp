#include "robospeech/decoder/session_record.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>

#include "robospeech/error.hpp"

namespace robospeech::decoder {

std::string record_line(const RecordEntry& entry) {
  struct Visitor {
    std::string operator()(const ObservationFrame& frame) const { return frame_to_json(frame); }
    std::string operator()(const GateEvent& gate) const {
      nlohmann::json j{{"ev", "gate"}, {"on", gate.robot_speaking}, {"t", gate.at}};
      return j.dump();
    }
    std::string operator()(const GrammarEvent& grammar) const {
      nlohmann::json j{{"ev", "grammar"}, {"id", grammar.id}};
      return j.dump();
    }
    std::string operator()(const ExtraEvent& extra) const { return extra.json; }
  };
  return std::visit(Visitor{}, entry);
}

RecordEntry parse_record_line(const std::string& text, int line_number) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ErrorCode::kMalformedRecord, e.what(), line_number);
  }
  try {
    if (!j.is_object()) throw ParseError(ErrorCode::kMalformedRecord, "not an object", line_number);
    if (j.contains("ev")) {
      auto kind = j.at("ev").get<std::string>();
      if (kind == "gate") return GateEvent{j.at("on").get<bool>(), j.at("t").get<double>()};
      if (kind == "grammar") return GrammarEvent{j.at("id").get<std::string>()};
      return ExtraEvent{kind, j.dump()};
    }
    ObservationFrame frame;
    frame.index = j.at("i").get<std::int64_t>();
    frame.posteriors = j.at("p").get<std::map<std::string, double>>();
    return frame;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ErrorCode::kMalformedRecord, e.what(), line_number);
  }
}

std::vector<RecordEntry> read_session_record(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::kMissingFile, "no session record at " + path);
  }
  std::ifstream in(path);
  std::vector<RecordEntry> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    entries.push_back(parse_record_line(line, number));
  }
  return entries;
}

SessionRecorder::SessionRecorder(const std::string& path) : path_(path), out_(path) {
  if (!out_) throw Error(ErrorCode::kMissingFile, "cannot write session record " + path);
}

void SessionRecorder::write(const RecordEntry& entry) {
  out_ << record_line(entry) << '\n';
  if (!std::holds_alternative<ObservationFrame>(entry)) out_.flush();
}

}  // namespace robospeech::decoder
