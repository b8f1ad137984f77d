#include "robospeech/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>

#include "robospeech/decoder/result_log.hpp"
#include "robospeech/error.hpp"
#include "robospeech/eval/metrics.hpp"

namespace robospeech::eval {
namespace {

bool contains(const std::vector<std::string>& items, const std::string& text) {
  return std::find(items.begin(), items.end(), text) != items.end();
}

nlohmann::json tally_json(const Tally& t) {
  nlohmann::json j{{"correct", t.correct}, {"total", t.total}};
  auto p = t.percent();
  j["accuracy"] = p ? nlohmann::json(*p) : nlohmann::json();
  return j;
}

std::string percent_text(const Tally& t) {
  auto p = t.percent();
  if (!p) return "-";
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%.1f%%", *p);
  return buffer;
}

}  // namespace

ReportOptions options_from_script(const dialogue::DialogueScript& script) {
  using dialogue::StateId;
  ReportOptions options;
  options.vocabulary = script.expected_phrases();
  options.multiple_choice = script.multiple_choice_phrases();
  for (StateId id : dialogue::all_states()) {
    for (const auto& c : script.state(id).choices) {
      if (dialogue::is_adapt(id)) {
        options.adaptation.push_back(c);
      } else if (id == StateId::kQuizIntro) {
        options.single_item.push_back(c);
      }
    }
  }
  return options;
}

std::optional<double> Tally::percent() const {
  if (total == 0) return std::nullopt;
  return accuracy(correct, total);
}

void EvalReport::merge(const EvalReport& other) {
  utterances += other.utterances;
  fluent += other.fluent;
  disfluent += other.disfluent;
  expected += other.expected;
  unexpected += other.unexpected;
  for (auto [mine, theirs] : {std::pair{&overall, &other.overall}, {&adaptation, &other.adaptation},
                              {&single_item, &other.single_item},
                              {&multiple_choice, &other.multiple_choice},
                              {&minor_disfluency, &other.minor_disfluency},
                              {&combined, &other.combined}}) {
    mine->correct += theirs->correct;
    mine->total += theirs->total;
  }
  segmentation_population += other.segmentation_population;
  unmatched += other.unmatched;
  aligned += other.aligned;
  early_start += other.early_start;
  late_start += other.late_start;
  early_end += other.early_end;
  late_end += other.late_end;
  rows.insert(rows.end(), other.rows.begin(), other.rows.end());
}

EvalReport build_report(const std::vector<GoldEntry>& gold,
                        const std::vector<UtteranceSegment>& automatic,
                        const ReportOptions& options) {
  std::vector<UtteranceSegment> child;
  for (const auto& entry : gold) {
    if (entry.speaker != kRobotSpeaker) child.push_back(entry.segment);
  }
  std::stable_sort(child.begin(), child.end(),
                   [](const UtteranceSegment& a, const UtteranceSegment& b) { return a.start < b.start; });
  auto matches = match_segments(child, automatic);

  EvalReport report;
  for (std::size_t i = 0; i < child.size(); ++i) {
    SegmentRow row;
    row.gold = child[i];
    if (matches[i]) row.automatic = automatic[*matches[i]];
    auto utterance = parse_transcription(child[i]);
    row.fluency = classify_fluency(utterance);
    ++report.utterances;

    if (row.fluency == Fluency::kDisfluent) {
      ++report.disfluent;
      row.expectedness = Expectedness::kUnexpected;
      row.category = "other";
      if (auto answer = minor_disfluency_match(child[i].text, options.multiple_choice)) {
        row.category = "minor_disfluency";
        if (row.automatic) {
          row.correct = row.automatic->text == *answer;
          report.minor_disfluency.add(row.correct);
          report.combined.add(row.correct);
        }
      }
      report.rows.push_back(std::move(row));
      continue;
    }

    ++report.fluent;
    row.expectedness = classify_expected(child[i].text, options.vocabulary);
    if (row.expectedness == Expectedness::kUnexpected) {
      ++report.unexpected;
      row.category = "other";
      report.rows.push_back(std::move(row));
      continue;
    }
    ++report.expected;
    ++report.segmentation_population;
    const std::string& text = child[i].text;
    row.category = contains(options.adaptation, text)        ? "adaptation"
                   : contains(options.single_item, text)     ? "single"
                   : contains(options.multiple_choice, text) ? "multiple_choice"
                                                             : "other";
    if (!row.automatic) {
      ++report.unmatched;
      report.rows.push_back(std::move(row));
      continue;
    }
    row.label = classify_segment_errors(child[i], *row.automatic, options.tolerance);
    report.aligned += row.label->aligned() ? 1 : 0;
    report.early_start += row.label->early_start ? 1 : 0;
    report.late_start += row.label->late_start ? 1 : 0;
    report.early_end += row.label->early_end ? 1 : 0;
    report.late_end += row.label->late_end ? 1 : 0;

    row.correct = row.automatic->text == text;
    report.overall.add(row.correct);
    if (row.category == "adaptation") report.adaptation.add(row.correct);
    if (row.category == "single") report.single_item.add(row.correct);
    if (row.category == "multiple_choice") {
      report.multiple_choice.add(row.correct);
      report.combined.add(row.correct);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["utterances"] = utterances;
  j["fluent"] = fluent;
  j["disfluent"] = disfluent;
  j["expected"] = expected;
  j["unexpected"] = unexpected;
  j["accuracy"] = {{"overall", tally_json(overall)},
                   {"adaptation", tally_json(adaptation)},
                   {"single", tally_json(single_item)},
                   {"multiple_choice", tally_json(multiple_choice)},
                   {"minor_disfluency", tally_json(minor_disfluency)},
                   {"combined", tally_json(combined)}};
  j["segmentation"] = {{"population", segmentation_population},
                       {"unmatched", unmatched},
                       {"aligned", aligned},
                       {"early_start", early_start},
                       {"late_start", late_start},
                       {"early_end", early_end},
                       {"late_end", late_end}};
  auto rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r{{"gold", {{"start", row.gold.start}, {"end", row.gold.end}, {"text", row.gold.text}}},
                     {"fluent", row.fluency == Fluency::kFluent},
                     {"expected", row.expectedness == Expectedness::kExpected},
                     {"category", row.category},
                     {"correct", row.correct}};
    if (row.automatic) {
      r["auto"] = {{"start", row.automatic->start}, {"end", row.automatic->end}, {"text", row.automatic->text}};
    } else {
      r["auto"] = nullptr;
    }
    r["label"] = row.label ? nlohmann::json(row.label->to_string()) : nlohmann::json();
    rows_json.push_back(std::move(r));
  }
  j["rows"] = std::move(rows_json);
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::string out;
  char line[128];
  auto add = [&](const char* name, std::size_t value) {
    std::snprintf(line, sizeof(line), "  %-22s %8zu\n", name, value);
    out += line;
  };
  auto add_tally = [&](const char* name, const Tally& t) {
    std::snprintf(line, sizeof(line), "  %-22s %8zu %8zu %9s\n", name, t.correct, t.total,
                  percent_text(t).c_str());
    out += line;
  };
  out += "Utterances\n";
  add("total", utterances);
  add("fluent", fluent);
  add("disfluent", disfluent);
  add("fluent expected", expected);
  add("fluent unexpected", unexpected);
  out += "\nAccuracy                correct    total  accuracy\n";
  add_tally("overall", overall);
  add_tally("adaptation", adaptation);
  add_tally("single phrase", single_item);
  add_tally("multiple choice", multiple_choice);
  add_tally("minor disfluency", minor_disfluency);
  add_tally("mc + minor disfluency", combined);
  out += "\nSegmentation errors\n";
  add("population", segmentation_population);
  add("unmatched", unmatched);
  add("aligned", aligned);
  add("early start", early_start);
  add("late start", late_start);
  add("early end", early_end);
  add("late end", late_end);
  return out;
}

std::vector<UtteranceSegment> parse_auto_log(std::istream& in, const std::string& name) {
  std::vector<UtteranceSegment> segments;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      if (auto result = decoder::parse_result_line(line, number)) segments.push_back(result->segment);
    } catch (const ParseError& e) {
      throw ParseError(ErrorCode::kLogParse, name + ": " + e.detail(), number);
    }
  }
  return segments;
}

std::vector<UtteranceSegment> load_auto_segments(const std::string& log_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(log_dir)) throw Error(ErrorCode::kMissingFile, "no log directory " + log_dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(log_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".jsonl") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<UtteranceSegment> segments;
  for (const auto& path : files) {
    std::ifstream in(path);
    auto part = parse_auto_log(in, path.filename().string());
    segments.insert(segments.end(), part.begin(), part.end());
  }
  return segments;
}

}  // namespace robospeech::eval
