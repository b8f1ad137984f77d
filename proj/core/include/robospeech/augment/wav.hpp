#pragma once

#include <string>
#include <vector>

namespace robospeech::augment {

struct Waveform {
  std::vector<float> samples;  // [-1, 1]
  int sample_rate = 16000;

  bool operator==(const Waveform&) const = default;
};

// 16-bit PCM mono RIFF/WAVE only. Throws Error(kUnreadableFile) for anything
// else, including a missing file.
Waveform read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& wave);

// Sample conversion used by the reader and writer: s / 32768 and back with
// rounding and saturation.
float pcm16_to_float(short sample);
short float_to_pcm16(float sample);

}  // namespace robospeech::augment
