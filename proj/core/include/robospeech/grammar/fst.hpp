#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robospeech/grammar/jsgf.hpp"
#include "robospeech/grammar/lexicon.hpp"

namespace robospeech::grammar {

inline constexpr int kEpsilon = 0;
inline constexpr const char* kEpsilonSymbol = "<eps>";

// Bijective word <-> id map; id 0 is always epsilon.
class SymbolTable {
 public:
  SymbolTable();

  int add(std::string_view word);
  std::optional<int> find(std::string_view word) const;
  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  bool operator==(const SymbolTable& other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::map<std::string, int, std::less<>> ids_;
};

// Unweighted word acceptor with epsilon arcs, as produced from the AST.
struct Fsm {
  struct Arc {
    int from = 0;
    int label = kEpsilon;
    int to = 0;
  };

  int num_states = 0;
  int start = 0;
  std::set<int> finals;
  std::vector<Arc> arcs;
  SymbolTable symbols;
};

struct FstArc {
  int from = 0;
  int to = 0;
  int ilabel = kEpsilon;
  int olabel = kEpsilon;
  double weight = 0.0;  // negative log probability

  bool operator==(const FstArc&) const = default;
};

// Epsilon-free weighted transducer over words. States are numbered in
// breadth-first order from the start state (always 0) and arcs are stored
// grouped by source state.
class GrammarFst {
 public:
  GrammarFst() = default;
  GrammarFst(std::string grammar_id, SymbolTable symbols, int num_states,
             std::map<int, double> finals, std::vector<FstArc> arcs);

  const std::string& grammar_id() const { return grammar_id_; }
  const SymbolTable& symbols() const { return symbols_; }
  int num_states() const { return num_states_; }
  int start() const { return 0; }
  const std::vector<FstArc>& arcs() const { return arcs_; }
  std::span<const FstArc> arcs_from(int state) const;
  std::size_t arc_offset(int state) const { return offsets_.at(static_cast<std::size_t>(state)); }
  bool is_final(int state) const { return finals_.count(state) != 0; }
  double final_weight(int state) const;
  const std::map<int, double>& finals() const { return finals_; }

  // Phone expansions of every word in the symbol table (see attach_lexicon).
  const std::map<std::string, Pronunciation>& pronunciations() const { return pronunciations_; }
  void set_pronunciations(std::map<std::string, Pronunciation> prons) {
    pronunciations_ = std::move(prons);
  }

  bool operator==(const GrammarFst& other) const {
    return grammar_id_ == other.grammar_id_ && symbols_ == other.symbols_ &&
           num_states_ == other.num_states_ && finals_ == other.finals_ && arcs_ == other.arcs_;
  }

 private:
  std::string grammar_id_;
  SymbolTable symbols_;
  int num_states_ = 0;
  std::map<int, double> finals_;
  std::vector<FstArc> arcs_;
  std::vector<std::size_t> offsets_;
  std::map<std::string, Pronunciation> pronunciations_;
};

// AST -> FSM. Every public rule is a top-level branch; with `silence` the
// single-word sentence "!SIL" is one more branch.
Fsm build_fsm(const GrammarAst& ast, bool silence);

// FSM -> weighted FST: every arc leaving a state with n outgoing arcs weighs
// ln(n), then epsilons are removed in the tropical semiring and the result is
// trimmed and renumbered.
GrammarFst fsm_to_fst(const Fsm& fsm, std::string grammar_id);

GrammarFst compile_grammar(const GrammarAst& ast, bool silence);
GrammarFst compile_grammar(const GrammarAst& ast, bool silence, std::string grammar_id);

// All accepted sentences (words joined by single spaces). Throws
// Error(kLimitExceeded) if more than `limit` distinct sentences exist.
std::set<std::string> enumerate_language(const GrammarFst& fst, std::size_t limit);

void attach_lexicon(GrammarFst& fst, const Lexicon& lexicon);

// Text serialization: arcs `from to input output weight`, final states
// `state weight`; symbols in a sidecar `word id`. Output is byte-stable.
std::string write_fst_text(const GrammarFst& fst);
std::string write_symbols_text(const SymbolTable& symbols);
GrammarFst read_fst_text(std::string_view fst_text, std::string_view symbols_text,
                         std::string grammar_id);

}  // namespace robospeech::grammar
