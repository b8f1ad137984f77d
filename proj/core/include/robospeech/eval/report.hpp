#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/dialogue/script.hpp"
#include "robospeech/eval/matching.hpp"
#include "robospeech/eval/transcript.hpp"

namespace robospeech::eval {

struct ReportOptions {
  double tolerance = kDefaultTolerance;
  std::vector<std::string> vocabulary;       // every expected phrase
  std::vector<std::string> adaptation;       // repeat-after-me phrases
  std::vector<std::string> single_item;      // other one-phrase grammars
  std::vector<std::string> multiple_choice;  // quiz answers and commands
};

ReportOptions options_from_script(const dialogue::DialogueScript& script);

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;

  std::optional<double> percent() const;
  void add(bool ok) {
    ++total;
    correct += ok ? 1 : 0;
  }
};

struct SegmentRow {
  UtteranceSegment gold;
  std::optional<UtteranceSegment> automatic;
  Fluency fluency = Fluency::kFluent;
  Expectedness expectedness = Expectedness::kExpected;
  std::string category;  // adaptation | single | multiple_choice | minor_disfluency | other
  std::optional<SegmentationErrorLabel> label;  // fluent expected and matched only
  bool correct = false;
};

// Counts over child (non-robot) gold segments. Two populations are kept
// apart: accuracy is computed over fluent expected utterances that have a
// matching automatic segment; the segmentation table covers every fluent
// expected utterance and counts the unmatched ones separately.
struct EvalReport {
  std::size_t utterances = 0;
  std::size_t fluent = 0;
  std::size_t disfluent = 0;
  std::size_t expected = 0;    // among fluent
  std::size_t unexpected = 0;  // among fluent

  Tally overall;
  Tally adaptation;
  Tally single_item;
  Tally multiple_choice;
  Tally minor_disfluency;
  Tally combined;  // multiple choice plus minor disfluencies

  std::size_t segmentation_population = 0;
  std::size_t unmatched = 0;
  std::size_t aligned = 0;
  std::size_t early_start = 0;
  std::size_t late_start = 0;
  std::size_t early_end = 0;
  std::size_t late_end = 0;

  std::vector<SegmentRow> rows;

  void merge(const EvalReport& other);
  std::string to_json() const;
  std::string to_table() const;
};

EvalReport build_report(const std::vector<GoldEntry>& gold,
                        const std::vector<UtteranceSegment>& automatic,
                        const ReportOptions& options);

// Result segments of one decoder log; `name` prefixes error messages. Throws
// ParseError(kLogParse) with the offending line.
std::vector<UtteranceSegment> parse_auto_log(std::istream& in, const std::string& name);
// All `*.jsonl` logs in a directory, in file-name order.
std::vector<UtteranceSegment> load_auto_segments(const std::string& log_dir);

}  // namespace robospeech::eval
