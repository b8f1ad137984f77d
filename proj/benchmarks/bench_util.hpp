#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "robospeech/decoder/frame.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/segment.hpp"

namespace bench {

inline const robospeech::grammar::GrammarLibrary& library() {
  static const auto lib = robospeech::grammar::GrammarLibrary::load_directory(
      std::string(ROBOSPEECH_BENCH_DATA_DIR) + "/grammars");
  return lib;
}

// Silence, then `per_word` frames per word leaning 0.7 on the word, then
// `trail` frames of silence.
inline std::vector<robospeech::decoder::ObservationFrame> stream(const std::vector<std::string>& vocab,
                                                                 const std::vector<std::string>& words,
                                                                 std::size_t per_word, std::size_t trail,
                                                                 std::uint64_t seed) {
  using robospeech::decoder::ObservationFrame;
  std::mt19937_64 rng(seed);
  std::vector<ObservationFrame> out;
  std::int64_t index = 0;
  auto frame = [&](const std::string& lead) {
    ObservationFrame f{index++, {}};
    f.posteriors[lead] = 0.7;
    std::vector<double> rest(vocab.size());
    double sum = 0;
    for (auto& r : rest) sum += (r = std::uniform_real_distribution<>(0.01, 1.0)(rng));
    for (std::size_t i = 0; i < vocab.size(); ++i) f.posteriors[vocab[i]] += 0.3 * rest[i] / sum;
    out.push_back(std::move(f));
  };
  for (int i = 0; i < 20; ++i) frame(robospeech::kSilenceWord);
  for (const auto& w : words) {
    for (std::size_t k = 0; k < per_word; ++k) frame(w);
  }
  for (std::size_t i = 0; i < trail; ++i) frame(robospeech::kSilenceWord);
  return out;
}

inline std::vector<std::string> vocabulary(const robospeech::grammar::GrammarFst& fst) {
  const auto& words = fst.symbols().words();
  return {words.begin() + 1, words.end()};
}

}  // namespace bench
