#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "robospeech/decoder/frame.hpp"
#include "robospeech/dialogue/machine.hpp"
#include "robospeech/grammar/library.hpp"

namespace robospeech::testing {

std::string data_path(const std::string& relative);

const grammar::GrammarLibrary& library();
std::shared_ptr<const grammar::GrammarLibrary> shared_library();
const dialogue::DialogueScript& script();
const dialogue::DialogueMachine& machine();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name = "") const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

// Frames whose posteriors lean towards `sentence` (one word per `per_word`
// frames, silence around it) with random mass on the other words.
std::vector<decoder::ObservationFrame> noisy_frames(const std::vector<std::string>& vocabulary,
                                                    const std::vector<std::string>& sentence,
                                                    std::size_t lead, std::size_t per_word,
                                                    std::size_t trail, std::mt19937_64& rng);

// Random JSGF source over a small vocabulary: nested sequences,
// alternations, optionals and one helper rule.
std::string random_grammar_text(std::mt19937_64& rng, const std::string& name);

// Speech-like test signal: a few enveloped partials.
std::vector<float> tone_signal(std::size_t samples, int sample_rate, double amplitude, std::uint64_t seed);
std::vector<float> white_noise(std::size_t samples, double amplitude, std::uint64_t seed);

}  // namespace robospeech::testing
