#pragma once

#include <string>
#include <vector>

#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/eval/report.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/sim/session.hpp"

namespace robospeech::sim {

struct ReplayOutput {
  std::vector<decoder::DecodeResult> results;
  std::vector<decoder::RecognizerEvent> events;
};

// Drives a fresh recognizer through a recorded timeline on a single thread:
// frames are pumped, gate and grammar events applied in order, bookkeeping
// lines skipped.
ReplayOutput replay_timeline(const std::vector<decoder::RecordEntry>& timeline,
                             decoder::RecognizerConfig config, const grammar::GrammarLibrary& library);
ReplayOutput replay_file(const std::string& path, decoder::RecognizerConfig config,
                         const grammar::GrammarLibrary& library);

std::vector<UtteranceSegment> result_segments(const std::vector<decoder::DecodeResult>& results);

// Report of decoder results against the session's gold annotation.
eval::EvalReport evaluate_session(const GoldAnnotation& gold,
                                  const std::vector<decoder::DecodeResult>& results,
                                  const eval::ReportOptions& options);

// Result log lines (wall clock stripped) for byte comparison of runs.
std::vector<std::string> result_log_lines(const std::vector<decoder::RecognizerEvent>& events);

}  // namespace robospeech::sim
