#pragma once

#include <istream>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace robospeech::grammar {

using PhoneSequence = std::vector<std::string>;

struct Pronunciation {
  std::vector<PhoneSequence> variants;
  bool fallback = false;  // letters used as phones; no dictionary entry

  bool operator==(const Pronunciation&) const = default;
};

// Pronunciation dictionary in the Beep layout: `WORD ph1 ph2 ...` per line,
// repeated lines give alternative pronunciations.
class Lexicon {
 public:
  static Lexicon parse(std::istream& in);
  static Lexicon load(const std::string& path);

  void add(std::string_view word, PhoneSequence phones);

  // Dictionary entry if present, otherwise one phone per letter flagged as a
  // fallback. Throws Error(kInvalidArgument) for an empty word.
  Pronunciation lookup(std::string_view word) const;

  bool contains(std::string_view word) const;
  const std::set<std::string>& phone_inventory() const { return phones_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<PhoneSequence>, std::less<>> entries_;
  std::set<std::string> phones_;
};

inline constexpr const char* kSilencePhone = "sil";

}  // namespace robospeech::grammar
