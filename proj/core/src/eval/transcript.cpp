#include "robospeech/eval/transcript.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "robospeech/error.hpp"

namespace robospeech::eval {

bool TranscribedUtterance::has_markers() const {
  return std::any_of(mispronounced.begin(), mispronounced.end(), [](bool b) { return b; }) ||
         std::any_of(false_start.begin(), false_start.end(), [](bool b) { return b; });
}

std::vector<std::string> TranscribedUtterance::content_words() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!false_start[i]) out.push_back(words[i]);
  }
  return out;
}

std::vector<std::string> split_words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> words;
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

TranscribedUtterance parse_transcription(const UtteranceSegment& segment) {
  TranscribedUtterance u;
  u.segment = segment;
  for (const auto& token : split_words(segment.text)) {
    std::string word = token;
    bool star = !word.empty() && word.front() == '*';
    if (star) word.erase(0, 1);
    bool dash = !word.empty() && word.back() == '-';
    if (dash) word.pop_back();
    if (word.empty() || word.find_first_of("*-") != std::string::npos || (star && dash)) {
      throw Error(ErrorCode::kMarkerSyntax, "bad marker in token '" + token + "'");
    }
    u.words.push_back(word);
    u.mispronounced.push_back(star);
    u.false_start.push_back(dash);
  }
  return u;
}

Fluency classify_fluency(const TranscribedUtterance& utterance) {
  return utterance.has_markers() ? Fluency::kDisfluent : Fluency::kFluent;
}

Expectedness classify_expected(const std::string& text, const std::vector<std::string>& vocabulary) {
  if (text == kSilenceWord) return Expectedness::kExpected;
  return std::find(vocabulary.begin(), vocabulary.end(), text) != vocabulary.end()
             ? Expectedness::kExpected
             : Expectedness::kUnexpected;
}

std::optional<std::string> minor_disfluency_match(const std::string& text,
                                                  const std::vector<std::string>& answers) {
  auto utterance = parse_transcription(UtteranceSegment{0.0, 0.0, text, SegmentSource::kGold});
  auto content = utterance.content_words();
  std::set<std::string> spoken(content.begin(), content.end());
  std::optional<std::string> best;
  double best_coverage = 0.0;
  for (const auto& answer : answers) {
    auto words = split_words(answer);
    std::set<std::string> needed(words.begin(), words.end());
    if (needed.empty()) continue;
    std::size_t hit = 0;
    for (const auto& w : needed) hit += spoken.count(w);
    double coverage = static_cast<double>(hit) / static_cast<double>(needed.size());
    // Strictly more than 75%: compare 4*hit > 3*n exactly in integers.
    if (4 * hit <= 3 * needed.size()) continue;
    if (!best || coverage > best_coverage) {
      best = answer;
      best_coverage = coverage;
    }
  }
  return best;
}

namespace {

double parse_time(const std::string& field, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(ErrorCode::kLogParse, "bad time '" + field + "'", line);
  }
  return value;
}

std::string format_time(double t) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), t);
  return std::string(buffer, end);
}

}  // namespace

std::vector<GoldEntry> read_gold_tsv(std::istream& in) {
  std::vector<GoldEntry> entries;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
      auto tab = line.find('\t', pos);
      if (tab == std::string::npos) throw ParseError(ErrorCode::kLogParse, "expected 4 tab-separated fields", number);
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    fields.push_back(line.substr(pos));
    GoldEntry entry;
    entry.segment.start = parse_time(fields[0], number);
    entry.segment.end = parse_time(fields[1], number);
    if (entry.segment.start < 0 || entry.segment.end < entry.segment.start) {
      throw ParseError(ErrorCode::kLogParse, "segment times out of order", number);
    }
    entry.speaker = fields[2];
    entry.segment.text = fields[3];
    entry.segment.source = SegmentSource::kGold;
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<GoldEntry> load_gold_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot read gold annotation " + path);
  return read_gold_tsv(in);
}

std::string write_gold_tsv(const std::vector<GoldEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += format_time(e.segment.start) + '\t' + format_time(e.segment.end) + '\t' + e.speaker + '\t' +
           e.segment.text + '\n';
  }
  return out;
}

}  // namespace robospeech::eval
