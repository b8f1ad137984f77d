#include "fixtures.hpp"

#include <atomic>
#include <cmath>
#include <unistd.h>

namespace robospeech::testing {

std::string data_path(const std::string& relative) {
  return (std::filesystem::path(ROBOSPEECH_TEST_DATA_DIR) / relative).string();
}

std::shared_ptr<const grammar::GrammarLibrary> shared_library() {
  static auto lib = std::make_shared<const grammar::GrammarLibrary>(
      grammar::GrammarLibrary::load_directory(data_path("grammars")));
  return lib;
}

const grammar::GrammarLibrary& library() { return *shared_library(); }

const dialogue::DialogueScript& script() {
  static const auto s = dialogue::DialogueScript::load(data_path("healthy_living.json"));
  return s;
}

const dialogue::DialogueMachine& machine() {
  static const dialogue::DialogueMachine m(script());
  return m;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("robospeech-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::vector<decoder::ObservationFrame> noisy_frames(const std::vector<std::string>& vocabulary,
                                                    const std::vector<std::string>& sentence,
                                                    std::size_t lead, std::size_t per_word,
                                                    std::size_t trail, std::mt19937_64& rng) {
  std::vector<std::string> truth(lead, "!SIL");
  for (const auto& w : sentence) truth.insert(truth.end(), per_word, w);
  truth.insert(truth.end(), trail, "!SIL");

  std::vector<std::string> symbols = vocabulary;
  symbols.push_back("!SIL");
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  std::vector<decoder::ObservationFrame> frames;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    decoder::ObservationFrame f;
    f.index = static_cast<std::int64_t>(i);
    double total = 0.0;
    for (const auto& s : symbols) {
      double w = unit(rng) + (s == truth[i] ? 2.0 : 0.0);
      f.posteriors[s] += w;
      total += w;
    }
    for (auto& [s, p] : f.posteriors) p /= total;
    frames.push_back(std::move(f));
  }
  return frames;
}

namespace {

std::string random_expr(std::mt19937_64& rng, int depth, bool allow_ref) {
  static const char* kWords[] = {"red", "green", "blue", "one", "two", "three", "go", "stop"};
  std::uniform_int_distribution<int> word(0, 7), pick(0, 99), count(2, 3);
  int roll = depth == 0 ? 0 : pick(rng);
  if (roll < 35) return kWords[word(rng)];
  if (roll < 40 && allow_ref) return "<part>";
  if (roll < 65) {
    std::string out;
    for (int i = count(rng); i > 0; --i) out += (out.empty() ? "" : " ") + random_expr(rng, depth - 1, allow_ref);
    return out;
  }
  if (roll < 88) {
    std::string out = "(";
    for (int i = count(rng); i > 0; --i) {
      out += (out.size() > 1 ? " | " : "") + random_expr(rng, depth - 1, allow_ref);
    }
    return out + ")";
  }
  return "[" + random_expr(rng, depth - 1, allow_ref) + "]";
}

}  // namespace

std::string random_grammar_text(std::mt19937_64& rng, const std::string& name) {
  std::string text = "#JSGF V1.0;\ngrammar " + name + ";\n";
  text += "<part> = " + random_expr(rng, 2, false) + ";\n";
  std::string body = random_expr(rng, 1, true) + " " + random_expr(rng, 2, true);
  text += "public <s> = " + body + ";\n";
  return text;
}

std::vector<float> tone_signal(std::size_t samples, int sample_rate, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(120.0, 900.0);
  double f1 = freq(rng), f2 = freq(rng), f3 = freq(rng);
  std::vector<float> out(samples);
  const double pi = std::acos(-1.0);
  for (std::size_t i = 0; i < samples; ++i) {
    double t = static_cast<double>(i) / sample_rate;
    double envelope = 0.5 - 0.5 * std::cos(2.0 * pi * static_cast<double>(i) / static_cast<double>(samples));
    double v = 0.5 * std::sin(2 * pi * f1 * t) + 0.3 * std::sin(2 * pi * f2 * t) + 0.2 * std::sin(2 * pi * f3 * t);
    out[i] = static_cast<float>(amplitude * envelope * v);
  }
  return out;
}

std::vector<float> white_noise(std::size_t samples, double amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  std::vector<float> out(samples);
  for (auto& s : out) s = static_cast<float>(u(rng));
  return out;
}

}  // namespace robospeech::testing
