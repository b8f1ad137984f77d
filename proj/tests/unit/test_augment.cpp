#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "robospeech/augment/mix.hpp"
#include "robospeech/augment/wav.hpp"
#include "robospeech/error.hpp"

using namespace robospeech;
using namespace robospeech::augment;
namespace rt = robospeech::testing;

namespace {

template <typename Body>
ErrorCode code_of(Body body) {
  try {
    body();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

Waveform sine(std::size_t n, double amplitude, int rate = 16000) {
  Waveform w{std::vector<float>(n), rate};
  for (std::size_t i = 0; i < n; ++i) {
    w.samples[i] = static_cast<float>(amplitude * std::sin(2.0 * std::numbers::pi * 440.0 * static_cast<double>(i) / rate));
  }
  return w;
}

std::string read_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(Rms, AnalyticCases) {
  EXPECT_DOUBLE_EQ(measure_rms({std::vector<float>(100, 0.5f), 16000}), 0.5);
  EXPECT_DOUBLE_EQ(measure_rms({std::vector<float>(100, 0.0f), 16000}), 0.0);
  EXPECT_NEAR(measure_rms(sine(16000, 1.0)), 1.0 / std::sqrt(2.0), 1e-6);
  EXPECT_EQ(code_of([] { measure_rms({{}, 16000}); }), ErrorCode::kEmptyInput);
}

TEST(SnrGain, AnalyticCases) {
  EXPECT_NEAR(snr_gain(0.2, 0.1, 20.0), 0.2, 1e-12);
  EXPECT_NEAR(snr_gain(0.1, 0.1, 0.0), 1.0, 1e-12);
  EXPECT_NEAR(snr_gain(0.1, 0.1, 5.0), std::pow(10.0, -0.25), 1e-12);
  EXPECT_EQ(code_of([] { snr_gain(0.1, 0.0, 5.0); }), ErrorCode::kZeroNoise);
}

TEST(Mix, MeasuredSnrWithinHalfDecibel) {
  auto noise = Waveform{rt::white_noise(80000, 0.3, 4), 16000};
  for (std::uint64_t fixture = 0; fixture < 4; ++fixture) {
    Waveform signal = fixture == 0 ? sine(16000, 0.5)
                                   : Waveform{rt::tone_signal(12000 + 4000 * fixture, 16000, 0.3, fixture), 16000};
    for (double level : {5.0, 10.0, 20.0}) {
      auto mix = mix_at_snr(signal, noise, level, 17 + fixture);
      ASSERT_EQ(mix.clipped, 0u);
      EXPECT_NEAR(rt::measured_snr_db(signal.samples, mix.output.samples), level, 0.5);
      EXPECT_EQ(mix.output.samples.size(), signal.samples.size());
      EXPECT_EQ(mix.output.sample_rate, signal.sample_rate);
    }
  }
}

TEST(Mix, NoNoiseIsIdentity) {
  auto signal = sine(4000, 0.7);
  auto mix = mix_at_snr(signal, {rt::white_noise(8000, 0.3, 1), 16000}, kNoNoise, 3);
  EXPECT_EQ(mix.output, signal);
}

TEST(Mix, SeededDeterminism) {
  auto signal = Waveform{rt::tone_signal(8000, 16000, 0.3, 2), 16000};
  auto noise = Waveform{rt::white_noise(160000, 0.3, 5), 16000};
  auto a = mix_at_snr(signal, noise, 10.0, 9);
  auto b = mix_at_snr(signal, noise, 10.0, 9);
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(a.offset, b.offset);
  bool differs = false;
  for (std::uint64_t seed = 10; seed < 15; ++seed) differs = differs || mix_at_snr(signal, noise, 10.0, seed).offset != a.offset;
  EXPECT_TRUE(differs);
}

TEST(Mix, OffsetStaysInsideNoise) {
  auto signal = Waveform{rt::tone_signal(1000, 16000, 0.3, 2), 16000};
  auto noise = Waveform{rt::white_noise(1500, 0.3, 5), 16000};
  for (std::uint64_t seed = 0; seed < 200; ++seed) EXPECT_LE(mix_at_snr(signal, noise, 5.0, seed).offset, 500u);
  auto exact = Waveform{rt::white_noise(1000, 0.3, 6), 16000};
  EXPECT_EQ(mix_at_snr(signal, exact, 5.0, 1).offset, 0u);
}

TEST(Mix, ClippingIsCounted) {
  Waveform loud{std::vector<float>(1000, 0.99f), 16000};
  auto mix = mix_at_snr(loud, {rt::white_noise(1000, 0.5, 1), 16000}, 0.0, 1);
  EXPECT_GT(mix.clipped, 0u);
  for (float s : mix.output.samples) {
    EXPECT_LE(s, 1.0f);
    EXPECT_GE(s, -1.0f);
  }
}

TEST(Mix, Errors) {
  auto signal = sine(1000, 0.5);
  EXPECT_EQ(code_of([&] { mix_at_snr(signal, {rt::white_noise(2000, 0.3, 1), 8000}, 5.0, 1); }),
            ErrorCode::kRateMismatch);
  EXPECT_EQ(code_of([&] { mix_at_snr(signal, {rt::white_noise(999, 0.3, 1), 16000}, 5.0, 1); }),
            ErrorCode::kNoiseTooShort);
  EXPECT_EQ(code_of([&] { mix_at_snr(signal, {std::vector<float>(2000, 0.0f), 16000}, 5.0, 1); }),
            ErrorCode::kZeroNoise);
  EXPECT_EQ(code_of([&] { mix_at_snr({{}, 16000}, {rt::white_noise(10, 0.3, 1), 16000}, 5.0, 1); }),
            ErrorCode::kEmptyInput);
}

TEST(Wav, RoundTripAndConversion) {
  rt::TempDir dir("wav");
  Waveform w{{0.0f, 0.5f, -0.5f, 32767.0f / 32768.0f, -1.0f}, 22050};
  write_wav(dir.str("a.wav"), w);
  auto back = read_wav(dir.str("a.wav"));
  EXPECT_EQ(back, w);
  EXPECT_EQ(float_to_pcm16(2.0f), 32767);
  EXPECT_EQ(float_to_pcm16(-2.0f), -32768);
  EXPECT_EQ(pcm16_to_float(-32768), -1.0f);
  for (int s = -32768; s <= 32767; s += 97) {
    EXPECT_EQ(float_to_pcm16(pcm16_to_float(static_cast<short>(s))), s);
  }
}

TEST(Wav, UnreadableFiles) {
  rt::TempDir dir("badwav");
  EXPECT_EQ(code_of([&] { read_wav(dir.str("missing.wav")); }), ErrorCode::kUnreadableFile);
  std::ofstream(dir.str("junk.wav")) << "this is not a riff file";
  EXPECT_EQ(code_of([&] { read_wav(dir.str("junk.wav")); }), ErrorCode::kUnreadableFile);
}

class CorpusTest : public ::testing::Test {
 protected:
  void SetUp() override {
    for (int i = 0; i < 3; ++i) {
      inputs_.push_back(dir_.str("utt" + std::to_string(i) + ".wav"));
      write_wav(inputs_.back(), {rt::tone_signal(8000 + 2000 * i, 16000, 0.3, i), 16000});
    }
    write_wav(dir_.str("noise.wav"), {rt::white_noise(64000, 0.4, 8), 16000});
    std::filesystem::create_directories(dir_.path() / "out");
  }

  rt::TempDir dir_{"corpus"};
  std::vector<std::string> inputs_;
};

TEST_F(CorpusTest, NineOutputsForThreeByThree) {
  SnrSpec spec;
  spec.seed = 5;
  auto report = augment_corpus(inputs_, dir_.str("noise.wav"), spec, dir_.str("out"));
  EXPECT_TRUE(report.failures.empty());
  ASSERT_EQ(report.rows.size(), 9u);
  for (const auto& row : report.rows) {
    EXPECT_TRUE(std::filesystem::exists(row.output)) << row.output;
    auto clean = read_wav(row.input);
    auto mixed = read_wav(row.output);
    EXPECT_EQ(mixed.samples.size(), clean.samples.size());
    EXPECT_NEAR(rt::measured_snr_db(clean.samples, mixed.samples), row.level, 0.5);
  }
  EXPECT_TRUE(std::filesystem::exists(dir_.path() / "out" / "utt1.snr10.wav"));
  auto csv = manifest_csv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 10);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "input,level,offset_samples,gain,clipped_samples");
}

TEST_F(CorpusTest, EmptyManifest) {
  auto report = augment_corpus({}, dir_.str("noise.wav"), {}, dir_.str("out"));
  EXPECT_TRUE(report.rows.empty());
  EXPECT_TRUE(report.failures.empty());
}

TEST_F(CorpusTest, UnreadableEntryRecordedAndSkipped) {
  std::vector<std::string> inputs{inputs_[0], dir_.str("missing.wav"), inputs_[2]};
  auto report = augment_corpus(inputs, dir_.str("noise.wav"), {}, dir_.str("out"));
  EXPECT_EQ(report.rows.size(), 6u);
  ASSERT_EQ(report.failures.size(), 1u);
  EXPECT_EQ(report.failures[0].input, dir_.str("missing.wav"));
}

TEST_F(CorpusTest, OutputBytesDeterminedBySeed) {
  SnrSpec spec;
  spec.seed = 11;
  rt::TempDir other("corpus2");
  augment_corpus(inputs_, dir_.str("noise.wav"), spec, dir_.str("out"));
  augment_corpus(inputs_, dir_.str("noise.wav"), spec, other.str());
  for (const auto& entry : std::filesystem::directory_iterator(dir_.path() / "out")) {
    EXPECT_EQ(read_bytes(entry.path().string()), read_bytes(other.str(entry.path().filename().string())));
  }
}

TEST_F(CorpusTest, EntriesAreIndependent) {
  SnrSpec spec;
  spec.seed = 11;
  auto all = augment_corpus(inputs_, dir_.str("noise.wav"), spec, dir_.str("out"));
  auto one = augment_corpus({inputs_[2]}, dir_.str("noise.wav"), spec, dir_.str("out"));
  ASSERT_EQ(one.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(one.rows[i].offset, all.rows[6 + i].offset);
}

TEST(Manifest, ReadSkipsBlankLines) {
  rt::TempDir dir("manifest");
  std::ofstream(dir.str("m.txt")) << "a.wav\n\n  \nb.wav\n";
  EXPECT_EQ(read_manifest(dir.str("m.txt")), (std::vector<std::string>{"a.wav", "b.wav"}));
  EXPECT_EQ(level_tag(5.0), "5");
  EXPECT_EQ(level_tag(2.5), "2.5");
}
