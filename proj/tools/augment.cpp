#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/augment/mix.hpp"

using namespace robospeech;

namespace {

int run(int argc, char** argv) {
  CLI::App app{"Mix noise into utterances at fixed signal-to-noise ratios"};
  std::string noise, out_dir, manifest;
  std::vector<double> levels{5, 10, 20};
  std::uint64_t seed = 0;
  app.add_option("--noise", noise, "Noise WAV (16-bit PCM mono)")->required();
  app.add_option("--levels", levels, "SNR levels in dB")->delimiter(',');
  app.add_option("--seed", seed, "Seed for noise offsets");
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("manifest", manifest, "Text file with one input WAV per line")->required();
  CLI11_PARSE(app, argc, argv);

  augment::SnrSpec spec;
  spec.levels = levels;
  spec.seed = seed;
  auto report = augment::augment_corpus(augment::read_manifest(manifest), noise, spec, out_dir);
  std::string csv_path = out_dir + "/manifest.csv";
  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv || !(csv << augment::manifest_csv(report))) throw Error(ErrorCode::kMissingFile, "cannot write " + csv_path);

  std::size_t clipped = 0;
  for (const auto& row : report.rows) clipped += row.clipped;
  std::cout << report.rows.size() << " files written to " << out_dir << ", " << clipped << " clipped samples\n";
  for (const auto& f : report.failures) std::cerr << "skipped " << f.input << ": " << f.message << '\n';
  return report.failures.empty() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
