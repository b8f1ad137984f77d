#include "robospeech/sim/corrupt.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "robospeech/error.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::sim {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

ConfusableSets confusable_sets(const grammar::GrammarFst& fst) {
  std::map<std::string, std::set<std::string>> sets;
  for (int s = 0; s < fst.num_states(); ++s) {
    auto arcs = fst.arcs_from(s);
    for (const auto& arc : arcs) {
      const std::string& word = fst.symbols().word(arc.ilabel);
      auto& set = sets[word];
      set.insert(kSilenceWord);
      for (const auto& other : arcs) set.insert(fst.symbols().word(other.ilabel));
    }
  }
  ConfusableSets out;
  for (auto& [word, set] : sets) {
    set.erase(word);
    out[word] = std::vector<std::string>(set.begin(), set.end());
  }
  return out;
}

namespace {

std::string true_symbol(const decoder::ObservationFrame& frame) {
  std::string best;
  double p = -1.0;
  for (const auto& [symbol, q] : frame.posteriors) {
    if (q > p) {
      best = symbol;
      p = q;
    }
  }
  return best;
}

}  // namespace

std::vector<decoder::ObservationFrame> corrupt_observations(
    const std::vector<decoder::ObservationFrame>& clean, double p, std::uint64_t seed,
    const ConfusableSets& sets) {
  if (!(p >= 0.0 && p < 1.0)) throw Error(ErrorCode::kInvalidArgument, "confusion probability must be in [0,1)");
  std::vector<decoder::ObservationFrame> out = clean;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<std::string> silence_only{kSilenceWord};

  std::size_t i = 0;
  while (i < out.size()) {
    std::string word = true_symbol(clean[i]);
    std::size_t end = i + 1;
    while (end < out.size() && true_symbol(clean[end]) == word) ++end;
    if (word == kSilenceWord) {
      i = end;
      continue;
    }
    auto it = sets.find(word);
    const auto& others = (it == sets.end() || it->second.empty()) ? silence_only : it->second;
    double u = unit(rng);
    std::size_t choice = std::uniform_int_distribution<std::size_t>(0, others.size() - 1)(rng);
    if (p > 0.0) {
      std::string dominant = word;
      std::vector<std::string> spread = others;
      if (u < p) {
        dominant = others[choice];
        spread[choice] = word;
      }
      for (std::size_t f = i; f < end; ++f) {
        auto& posteriors = out[f].posteriors;
        posteriors.clear();
        posteriors[dominant] = 1.0 - p;
        for (const auto& s : spread) posteriors[s] = p / static_cast<double>(spread.size());
      }
    }
    i = end;
  }
  return out;
}

}  // namespace robospeech::sim
