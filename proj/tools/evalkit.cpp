#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/eval/metrics.hpp"
#include "robospeech/eval/report.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Evaluate decoder logs against gold annotations"};
  app.require_subcommand(1);

  auto* report_cmd = app.add_subcommand("report", "Accuracy and segmentation-error report");
  std::string gold, logs, out = "report.json", script_path = tools::data_path("healthy_living.json");
  double tolerance = eval::kDefaultTolerance;
  report_cmd->add_option("--gold", gold, "Gold TSV")->required();
  report_cmd->add_option("--logs", logs, "Directory of decoder JSON-line logs")->required();
  report_cmd->add_option("--tolerance", tolerance, "Boundary tolerance in seconds");
  report_cmd->add_option("--script", script_path, "Interaction script (expected phrases)");
  report_cmd->add_option("--out", out, "report.json path");

  auto* wer_cmd = app.add_subcommand("wer", "Word error rate of one hypothesis");
  std::string reference, hypothesis;
  wer_cmd->add_option("reference", reference)->required();
  wer_cmd->add_option("hypothesis", hypothesis)->required();
  CLI11_PARSE(app, argc, argv);

  if (*wer_cmd) {
    auto r = eval::split_words(reference), h = eval::split_words(hypothesis);
    auto counts = eval::edit_distance(r, h);
    std::cout << "wer " << eval::wer(r, h) << " (S=" << counts.substitutions << " D=" << counts.deletions
              << " I=" << counts.insertions << ")\n";
    return 0;
  }

  auto options = eval::options_from_script(dialogue::DialogueScript::load(script_path));
  options.tolerance = tolerance;
  auto report = eval::build_report(eval::load_gold_tsv(gold), eval::load_auto_segments(logs), options);
  std::ofstream json(out, std::ios::trunc);
  if (!json || !(json << report.to_json() << '\n')) throw Error(ErrorCode::kMissingFile, "cannot write " + out);
  std::cout << report.to_table();
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
