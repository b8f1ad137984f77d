#include "robospeech/sim/corpus.hpp"

#include <random>

#include "robospeech/error.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/sim/corrupt.hpp"

namespace robospeech::sim {

namespace {

constexpr std::int64_t kLeadFrames = 20;
constexpr std::int64_t kLanguageLimit = 10000;

}  // namespace

std::vector<CorpusUtterance> synthetic_corpus(const grammar::GrammarLibrary& library,
                                              const std::vector<std::string>& grammar_ids,
                                              std::size_t count, std::uint64_t seed, int frames_per_word) {
  if (grammar_ids.empty()) throw Error(ErrorCode::kInvalidArgument, "corpus needs at least one grammar");
  if (frames_per_word <= 0) throw Error(ErrorCode::kInvalidArgument, "frames per word must be positive");
  std::vector<std::vector<std::string>> languages;
  for (const auto& id : grammar_ids) {
    auto language = grammar::enumerate_language(*library.get(id), kLanguageLimit);
    language.erase(kSilenceWord);
    languages.emplace_back(language.begin(), language.end());
  }

  std::mt19937_64 rng(seed);
  const decoder::RecognizerConfig defaults;
  std::vector<CorpusUtterance> corpus;
  for (std::size_t n = 0; n < count; ++n) {
    std::size_t g = std::uniform_int_distribution<std::size_t>(0, grammar_ids.size() - 1)(rng);
    const auto& language = languages[g];
    std::size_t s = std::uniform_int_distribution<std::size_t>(0, language.size() - 1)(rng);
    CorpusUtterance u{grammar_ids[g], language[s], {}};
    std::int64_t index = 0;
    for (; index < kLeadFrames; ++index) u.frames.push_back(decoder::silence_frame(index));
    for (const auto& w : eval::split_words(u.text)) {
      for (int f = 0; f < frames_per_word; ++f) u.frames.push_back(decoder::word_frame(index++, w));
    }
    std::int64_t trail = defaults.endpoint_frames + kLeadFrames;
    for (std::int64_t f = 0; f < trail; ++f) u.frames.push_back(decoder::silence_frame(index++));
    corpus.push_back(std::move(u));
  }
  return corpus;
}

decoder::DecodeResult decode_isolated(const std::vector<decoder::ObservationFrame>& frames,
                                      std::shared_ptr<const grammar::GrammarFst> grammar,
                                      const decoder::RecognizerConfig& config) {
  decoder::RecognizerConfig c = config;
  c.record_path.clear();
  c.source = decoder::SourceKind::kFile;
  decoder::Recognizer recognizer(c);
  recognizer.set_grammar(std::move(grammar));
  for (const auto& frame : frames) {
    if (auto result = recognizer.pump(frame)) return *result;
  }
  double now = recognizer.now();
  auto result = recognizer.poll_result(now + c.utterance_timeout);
  if (!result) throw Error(ErrorCode::kInvalidArgument, "recognizer produced no result");
  return *result;
}

double corpus_accuracy(const std::vector<CorpusUtterance>& corpus, const grammar::GrammarLibrary& library,
                       double p, std::uint64_t seed, const decoder::RecognizerConfig& config) {
  if (corpus.empty()) throw Error(ErrorCode::kEmptyInput, "empty corpus");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto& u = corpus[i];
    auto grammar = library.get(u.grammar_id);
    auto frames = corrupt_observations(u.frames, p, mix_seed(seed, i), confusable_sets(*grammar));
    if (decode_isolated(frames, grammar, config).segment.text == u.text) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

}  // namespace robospeech::sim
