#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/segment.hpp"

namespace robospeech::eval {

// Transcription markers: `*word` = mispronounced, `word-` = false start.
struct TranscribedUtterance {
  UtteranceSegment segment;
  std::vector<std::string> words;  // tokens with markers removed
  std::vector<bool> mispronounced;
  std::vector<bool> false_start;

  bool has_markers() const;
  // Words that count towards an answer: false starts dropped.
  std::vector<std::string> content_words() const;
};

// Throws Error(kMarkerSyntax) for malformed markers such as a bare `*`,
// `wo*rd`, `*word-` or `--`.
TranscribedUtterance parse_transcription(const UtteranceSegment& segment);

enum class Fluency { kFluent, kDisfluent };
enum class Expectedness { kExpected, kUnexpected };

Fluency classify_fluency(const TranscribedUtterance& utterance);

// Exact phrase match or "!SIL".
Expectedness classify_expected(const std::string& text, const std::vector<std::string>& vocabulary);

// The answer whose distinct words are covered by more than 75% by the
// utterance's content words; ties go to higher coverage, then earlier answer.
std::optional<std::string> minor_disfluency_match(const std::string& text,
                                                  const std::vector<std::string>& answers);

std::vector<std::string> split_words(const std::string& text);

// Gold annotation line: `start<TAB>end<TAB>speaker<TAB>text`.
struct GoldEntry {
  UtteranceSegment segment;
  std::string speaker;

  bool operator==(const GoldEntry&) const = default;
};

inline constexpr const char* kRobotSpeaker = "robot";

// Throws ParseError(kLogParse) with the line number for malformed rows.
std::vector<GoldEntry> read_gold_tsv(std::istream& in);
std::vector<GoldEntry> load_gold_tsv(const std::string& path);
std::string write_gold_tsv(const std::vector<GoldEntry>& entries);

}  // namespace robospeech::eval
