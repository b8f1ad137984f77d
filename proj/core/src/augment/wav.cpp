#include "robospeech/augment/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>

#include "robospeech/error.hpp"

namespace robospeech::augment {
namespace {

std::uint32_t le32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

[[noreturn]] void unreadable(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kUnreadableFile, path + ": " + why);
}

}  // namespace

float pcm16_to_float(short sample) { return static_cast<float>(sample) / 32768.0f; }

short float_to_pcm16(float sample) {
  float scaled = std::round(sample * 32768.0f);
  return static_cast<short>(std::clamp(scaled, -32768.0f, 32767.0f));
}

Waveform read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) unreadable(path, "cannot open");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0) {
    unreadable(path, "not a RIFF/WAVE file");
  }
  Waveform wave;
  bool have_format = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    std::uint32_t size = le32(data + pos + 4);
    const unsigned char* body = data + pos + 8;
    if (pos + 8 + size > bytes.size()) unreadable(path, "truncated chunk");
    if (std::memcmp(data + pos, "fmt ", 4) == 0) {
      if (size < 16) unreadable(path, "short fmt chunk");
      if (le16(body) != 1) unreadable(path, "not PCM");
      if (le16(body + 2) != 1) unreadable(path, "not mono");
      if (le16(body + 14) != 16) unreadable(path, "not 16-bit");
      wave.sample_rate = static_cast<int>(le32(body + 4));
      have_format = true;
    } else if (std::memcmp(data + pos, "data", 4) == 0) {
      if (!have_format) unreadable(path, "data before fmt");
      wave.samples.reserve(size / 2);
      for (std::uint32_t i = 0; i + 1 < size; i += 2) {
        wave.samples.push_back(pcm16_to_float(static_cast<short>(le16(body + i))));
      }
      return wave;
    }
    pos += 8 + size + (size & 1);
  }
  unreadable(path, "no data chunk");
}

void write_wav(const std::string& path, const Waveform& wave) {
  if (wave.sample_rate <= 0) throw Error(ErrorCode::kInvalidArgument, "sample rate must be > 0");
  auto data_size = static_cast<std::uint32_t>(wave.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_size);
  out += "RIFF";
  put32(out, 36 + data_size);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(wave.sample_rate));
  put32(out, static_cast<std::uint32_t>(wave.sample_rate) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_size);
  for (float s : wave.samples) put16(out, static_cast<std::uint16_t>(float_to_pcm16(s)));
  std::ofstream file(path, std::ios::binary);
  if (!file.write(out.data(), static_cast<std::streamsize>(out.size()))) {
    throw Error(ErrorCode::kUnreadableFile, "cannot write " + path);
  }
}

}  // namespace robospeech::augment
