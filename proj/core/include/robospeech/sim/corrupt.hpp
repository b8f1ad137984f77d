#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "robospeech/decoder/frame.hpp"
#include "robospeech/grammar/fst.hpp"

namespace robospeech::sim {

// word -> the words it competes with: labels of the other arcs leaving any
// state that `word` leaves, plus "!SIL". Sorted, without the word itself.
using ConfusableSets = std::map<std::string, std::vector<std::string>>;

ConfusableSets confusable_sets(const grammar::GrammarFst& fst);

// Symbolic noise model. Clean frames are one-hot; each maximal run of frames
// carrying the same non-silence word w draws u ~ U(0,1) and a confusable c.
// Unflipped runs (u >= p) keep w at 1 - p and spread p evenly over w's
// confusables. Flipped runs (u < p) put 1 - p on c and spread p over the
// others with w in c's place. Both draws are made for every run, so a run
// flipped at one p stays flipped at any higher p for the same seed. Words
// missing from `sets` compete with "!SIL" only; silence frames pass through.
// Throws Error(kInvalidArgument) unless 0 <= p < 1.
std::vector<decoder::ObservationFrame> corrupt_observations(
    const std::vector<decoder::ObservationFrame>& clean, double p, std::uint64_t seed,
    const ConfusableSets& sets);

// Mixes two values into one well-spread seed.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace robospeech::sim
