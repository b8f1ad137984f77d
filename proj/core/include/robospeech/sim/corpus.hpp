#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/grammar/library.hpp"

namespace robospeech::sim {

// One isolated utterance: leading silence, clean word frames, enough
// trailing silence for an early endpoint.
struct CorpusUtterance {
  std::string grammar_id;
  std::string text;
  std::vector<decoder::ObservationFrame> frames;
};

// `count` utterances, each from a uniformly drawn grammar of `grammar_ids`
// and a uniformly drawn sentence of its language ("!SIL" excluded).
std::vector<CorpusUtterance> synthetic_corpus(const grammar::GrammarLibrary& library,
                                              const std::vector<std::string>& grammar_ids,
                                              std::size_t count, std::uint64_t seed,
                                              int frames_per_word = 30);

// Decodes one frame sequence alone with a fresh recognizer. Falls back to
// the timeout result if no early endpoint happens.
decoder::DecodeResult decode_isolated(const std::vector<decoder::ObservationFrame>& frames,
                                      std::shared_ptr<const grammar::GrammarFst> grammar,
                                      const decoder::RecognizerConfig& config);

// Fraction of utterances recognized exactly after corrupt_observations at
// confusion p. Utterance i uses seed mix_seed(seed, i) for every p.
double corpus_accuracy(const std::vector<CorpusUtterance>& corpus, const grammar::GrammarLibrary& library,
                       double p, std::uint64_t seed, const decoder::RecognizerConfig& config);

}  // namespace robospeech::sim
