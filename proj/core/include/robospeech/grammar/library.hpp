#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "robospeech/grammar/fst.hpp"

namespace robospeech::grammar {

// Grammar id that switches recognition off (states expecting no speech).
inline constexpr const char* kNoGrammar = "none";

// Precompiled grammars keyed by id. Loading a directory compiles every
// `<id>.gram` file with the silence branch enabled.
class GrammarLibrary {
 public:
  static GrammarLibrary load_directory(const std::string& dir);

  void add(const std::string& id, const GrammarAst& ast, bool silence = true);
  void add(std::shared_ptr<const GrammarFst> fst);

  // Throws Error(kNoGrammar) for unknown ids.
  std::shared_ptr<const GrammarFst> get(const std::string& id) const;
  const GrammarAst& ast(const std::string& id) const;
  bool contains(const std::string& id) const { return fsts_.count(id) != 0; }
  std::vector<std::string> ids() const;

 private:
  std::map<std::string, std::shared_ptr<const GrammarFst>> fsts_;
  std::map<std::string, GrammarAst> asts_;
};

}  // namespace robospeech::grammar
