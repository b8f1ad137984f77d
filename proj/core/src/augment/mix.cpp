#include "robospeech/augment/mix.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "robospeech/error.hpp"

namespace robospeech::augment {

double measure_rms(const Waveform& wave) {
  if (wave.samples.empty()) throw Error(ErrorCode::kEmptyInput, "empty waveform");
  double sum = 0.0;
  for (float s : wave.samples) sum += static_cast<double>(s) * s;
  return std::sqrt(sum / static_cast<double>(wave.samples.size()));
}

double snr_gain(double signal_rms, double noise_rms, double snr_db) {
  if (!(noise_rms > 0.0)) throw Error(ErrorCode::kZeroNoise, "noise RMS is zero");
  return signal_rms / noise_rms * std::pow(10.0, -snr_db / 20.0);
}

MixResult mix_at_snr(const Waveform& signal, const Waveform& noise, double snr_db,
                     std::uint64_t seed) {
  if (signal.samples.empty()) throw Error(ErrorCode::kEmptyInput, "empty signal");
  MixResult result;
  if (snr_db == kNoNoise) {
    result.output = signal;
    return result;
  }
  if (signal.sample_rate != noise.sample_rate) {
    throw Error(ErrorCode::kRateMismatch, std::to_string(signal.sample_rate) + " Hz signal, " +
                                              std::to_string(noise.sample_rate) + " Hz noise");
  }
  const std::size_t n = signal.samples.size();
  if (noise.samples.size() < n) throw Error(ErrorCode::kNoiseTooShort, "noise shorter than signal");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, noise.samples.size() - n);
  result.offset = pick(rng);
  Waveform slice{{noise.samples.begin() + static_cast<std::ptrdiff_t>(result.offset),
                  noise.samples.begin() + static_cast<std::ptrdiff_t>(result.offset + n)},
                 noise.sample_rate};
  result.gain = snr_gain(measure_rms(signal), measure_rms(slice), snr_db);

  result.output.sample_rate = signal.sample_rate;
  result.output.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double mixed = signal.samples[i] + result.gain * slice.samples[i];
    if (mixed > 1.0 || mixed < -1.0) {
      ++result.clipped;
      mixed = mixed > 1.0 ? 1.0 : -1.0;
    }
    result.output.samples[i] = static_cast<float>(mixed);
  }
  return result;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string level_tag(double level) {
  if (std::isinf(level)) return "inf";
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%g", level);
  return buffer;
}

AugmentReport augment_corpus(const std::vector<std::string>& inputs, const std::string& noise_path,
                             const SnrSpec& spec, const std::string& out_dir) {
  AugmentReport report;
  if (inputs.empty()) return report;
  for (double level : spec.levels) {
    if (std::isnan(level) || level == -kNoNoise) {
      throw Error(ErrorCode::kInvalidArgument, "SNR levels must be finite");
    }
  }
  Waveform noise = read_wav(noise_path);
  std::filesystem::create_directories(out_dir);
  for (const auto& input : inputs) {
    std::string stem = std::filesystem::path(input).stem().string();
    std::vector<AugmentRow> rows;
    try {
      Waveform signal = read_wav(input);
      for (double level : spec.levels) {
        MixResult mixed = mix_at_snr(signal, noise, level, spec.seed ^ fnv1a(stem));
        AugmentRow row{input, level, mixed.offset, mixed.gain, mixed.clipped, {}};
        row.output = (std::filesystem::path(out_dir) / (stem + ".snr" + level_tag(level) + ".wav")).string();
        write_wav(row.output, mixed.output);
        rows.push_back(std::move(row));
      }
    } catch (const Error& e) {
      report.failures.push_back({input, e.what()});
      continue;
    }
    report.rows.insert(report.rows.end(), rows.begin(), rows.end());
  }
  return report;
}

std::string manifest_csv(const AugmentReport& report) {
  std::string out = "input,level,offset_samples,gain,clipped_samples\n";
  char buffer[64];
  for (const auto& row : report.rows) {
    out += row.input + ',' + level_tag(row.level) + ',' + std::to_string(row.offset) + ',';
    std::snprintf(buffer, sizeof(buffer), "%.9g", row.gain);
    out += buffer;
    out += ',' + std::to_string(row.clipped) + '\n';
  }
  return out;
}

std::vector<std::string> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kUnreadableFile, "cannot read manifest " + path);
  std::vector<std::string> paths;
  std::string line;
  while (std::getline(in, line)) {
    auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    auto end = line.find_last_not_of(" \t\r");
    paths.push_back(line.substr(begin, end - begin + 1));
  }
  return paths;
}

}  // namespace robospeech::augment
