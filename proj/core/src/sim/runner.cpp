#include "robospeech/sim/runner.hpp"

#include "robospeech/decoder/result_log.hpp"
#include "robospeech/decoder/session_record.hpp"

namespace robospeech::sim {

ReplayOutput replay_timeline(const std::vector<decoder::RecordEntry>& timeline,
                             decoder::RecognizerConfig config, const grammar::GrammarLibrary& library) {
  config.source = decoder::SourceKind::kFile;
  decoder::Recognizer recognizer(config);
  ReplayOutput out;
  recognizer.add_sink([&out](const decoder::RecognizerEvent& e) { out.events.push_back(e); });
  decoder::GrammarResolver resolve = [&library](const std::string& id) { return library.get(id); };
  for (const auto& entry : timeline) {
    if (auto result = decoder::apply_entry(recognizer, entry, resolve)) out.results.push_back(*result);
  }
  return out;
}

ReplayOutput replay_file(const std::string& path, decoder::RecognizerConfig config,
                         const grammar::GrammarLibrary& library) {
  return replay_timeline(decoder::read_session_record(path), std::move(config), library);
}

std::vector<UtteranceSegment> result_segments(const std::vector<decoder::DecodeResult>& results) {
  std::vector<UtteranceSegment> out;
  out.reserve(results.size());
  for (const auto& r : results) out.push_back(r.segment);
  return out;
}

eval::EvalReport evaluate_session(const GoldAnnotation& gold,
                                  const std::vector<decoder::DecodeResult>& results,
                                  const eval::ReportOptions& options) {
  return eval::build_report(gold.entries(), result_segments(results), options);
}

std::vector<std::string> result_log_lines(const std::vector<decoder::RecognizerEvent>& events) {
  std::vector<std::string> lines;
  for (const auto& e : events) lines.push_back(decoder::strip_wall_clock(decoder::event_to_json(e, "")));
  return lines;
}

}  // namespace robospeech::sim
