#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "robospeech/augment/wav.hpp"

namespace robospeech::augment {

// snr_db value meaning "add no noise".
inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

// Throws Error(kEmptyInput) for an empty waveform.
double measure_rms(const Waveform& wave);

// Noise gain g = (signal_rms / noise_rms) * 10^(-snr_db / 20). Throws
// Error(kZeroNoise) unless noise_rms > 0.
double snr_gain(double signal_rms, double noise_rms, double snr_db);

struct MixResult {
  Waveform output;
  std::size_t offset = 0;   // first noise sample used
  double gain = 0.0;
  std::size_t clipped = 0;  // samples saturated at +-1
};

// signal + g * noise[offset, offset + n), the offset drawn from `seed`, SNR
// measured over the whole utterance. Throws Error(kRateMismatch),
// Error(kNoiseTooShort), Error(kZeroNoise) or Error(kEmptyInput).
MixResult mix_at_snr(const Waveform& signal, const Waveform& noise, double snr_db,
                     std::uint64_t seed);

struct SnrSpec {
  std::vector<double> levels{5.0, 10.0, 20.0};
  std::uint64_t seed = 0;
};

struct AugmentRow {
  std::string input;
  double level = 0.0;
  std::size_t offset = 0;
  double gain = 0.0;
  std::size_t clipped = 0;
  std::string output;
};

struct AugmentFailure {
  std::string input;
  std::string message;
};

struct AugmentReport {
  std::vector<AugmentRow> rows;
  std::vector<AugmentFailure> failures;
};

// Writes `<out_dir>/<stem>.snr<level>.wav` for every input and level. An
// input that cannot be read or mixed is recorded as a failure and skipped.
// Each input uses seed ^ fnv1a(stem), so entries are independent.
AugmentReport augment_corpus(const std::vector<std::string>& inputs, const std::string& noise_path,
                             const SnrSpec& spec, const std::string& out_dir);

std::uint64_t fnv1a(const std::string& text);
std::string level_tag(double level);

// CSV `input,level,offset_samples,gain,clipped_samples` with a header row.
std::string manifest_csv(const AugmentReport& report);
// One path per non-blank line.
std::vector<std::string> read_manifest(const std::string& path);

}  // namespace robospeech::augment
