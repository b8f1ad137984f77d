#include "robospeech/grammar/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "robospeech/error.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::grammar {
namespace {

std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Lexicon Lexicon::parse(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string word;
    if (!(fields >> word) || word.front() == '#') continue;
    PhoneSequence phones;
    std::string phone;
    while (fields >> phone) phones.push_back(phone);
    if (phones.empty()) continue;
    lexicon.add(word, std::move(phones));
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, path);
  return parse(in);
}

void Lexicon::add(std::string_view word, PhoneSequence phones) {
  for (const auto& phone : phones) phones_.insert(phone);
  entries_[lowercase(word)].push_back(std::move(phones));
}

bool Lexicon::contains(std::string_view word) const {
  return entries_.find(lowercase(word)) != entries_.end();
}

Pronunciation Lexicon::lookup(std::string_view word) const {
  if (word.empty()) throw Error(ErrorCode::kInvalidArgument, "empty word");
  std::string key = lowercase(word);
  if (auto it = entries_.find(key); it != entries_.end()) return {it->second, false};
  if (word == kSilenceWord) return {{{kSilencePhone}}, false};
  PhoneSequence letters;
  for (char c : key) {
    if (std::isalpha(static_cast<unsigned char>(c))) letters.emplace_back(1, c);
  }
  if (letters.empty()) letters.push_back(key);
  return {{std::move(letters)}, true};
}

}  // namespace robospeech::grammar
