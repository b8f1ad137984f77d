#include "robospeech/decoder/result_log.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <nlohmann/json.hpp>

#include "robospeech/error.hpp"

namespace robospeech::decoder {

std::string event_to_json(const RecognizerEvent& event, const std::string& wall) {
  nlohmann::json j;
  j["t"] = event.time;
  switch (event.kind) {
    case RecognizerEvent::Kind::kResult: {
      const auto& r = *event.result;
      j["type"] = "result";
      j["text"] = r.segment.text;
      j["start"] = r.segment.start;
      j["end"] = r.segment.end;
      j["score"] = std::isfinite(r.score) ? nlohmann::json(r.score) : nlohmann::json();
      j["endpoint"] = std::string(to_string(r.endpoint));
      j["grammar"] = r.grammar_id;
      j["window_start_frame"] = r.window_start_frame;
      auto words = nlohmann::json::array();
      for (const auto& w : r.words) {
        words.push_back({{"w", w.word}, {"start", w.start_frame}, {"end", w.end_frame}});
      }
      j["words"] = std::move(words);
      break;
    }
    case RecognizerEvent::Kind::kAborted:
      j["type"] = "aborted";
      j["partial"] = event.text;
      break;
    case RecognizerEvent::Kind::kGrammar:
      j["type"] = "grammar";
      j["id"] = event.text;
      break;
    case RecognizerEvent::Kind::kGate:
      j["type"] = "gate";
      j["on"] = event.robot_speaking;
      break;
  }
  j["wall"] = wall;
  return j.dump();
}

std::optional<DecodeResult> parse_result_line(const std::string& text, int line_number) {
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw ParseError(ErrorCode::kLogParse, "not a JSON object", line_number);
    if (j.at("type").get<std::string>() != "result") return std::nullopt;
    DecodeResult r;
    r.segment.text = j.at("text").get<std::string>();
    r.segment.start = j.at("start").get<double>();
    r.segment.end = j.at("end").get<double>();
    r.segment.source = SegmentSource::kAuto;
    r.score = j.at("score").is_null() ? kInfCost : j.at("score").get<double>();
    auto endpoint = j.at("endpoint").get<std::string>();
    if (endpoint != "early" && endpoint != "timeout") {
      throw ParseError(ErrorCode::kLogParse, "bad endpoint kind '" + endpoint + "'", line_number);
    }
    r.endpoint = endpoint == "early" ? EndpointKind::kEarly : EndpointKind::kTimeout;
    r.grammar_id = j.value("grammar", "");
    r.window_start_frame = j.value("window_start_frame", std::int64_t{0});
    r.emitted_at = j.at("t").get<double>();
    if (j.contains("words")) {
      for (const auto& w : j.at("words")) {
        r.words.push_back({w.at("w").get<std::string>(), w.at("start").get<std::int64_t>(),
                           w.at("end").get<std::int64_t>()});
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ErrorCode::kLogParse, e.what(), line_number);
  }
}

std::string strip_wall_clock(const std::string& line) {
  auto j = nlohmann::json::parse(line);
  j.erase("wall");
  return j.dump();
}

std::string iso_wall_clock() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm local{};
  localtime_r(&t, &local);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%S", &local);
  return buffer;
}

ResultLog::ResultLog(const std::string& dir, WallClock wall)
    : wall_(wall ? std::move(wall) : WallClock(iso_wall_clock)) {
  std::filesystem::create_directories(dir);
  std::string stamp = wall_();
  path_ = (std::filesystem::path(dir) / ("asr-" + stamp.substr(0, 10) + ".jsonl")).string();
  out_.open(path_, std::ios::app);
  if (!out_) throw Error(ErrorCode::kMissingFile, "cannot open log " + path_);
}

void ResultLog::write(const RecognizerEvent& event) {
  out_ << event_to_json(event, wall_()) << '\n';
  out_.flush();
}

}  // namespace robospeech::decoder
