#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <tuple>

#include "robospeech/error.hpp"
#include "robospeech/grammar/fst.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::grammar {

SymbolTable::SymbolTable() {
  words_.push_back(kEpsilonSymbol);
  ids_.emplace(kEpsilonSymbol, kEpsilon);
}

int SymbolTable::add(std::string_view word) {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  int id = static_cast<int>(words_.size());
  words_.emplace_back(word);
  ids_.emplace(std::string(word), id);
  return id;
}

std::optional<int> SymbolTable::find(std::string_view word) const {
  if (auto it = ids_.find(word); it != ids_.end()) return it->second;
  return std::nullopt;
}

GrammarFst::GrammarFst(std::string grammar_id, SymbolTable symbols, int num_states,
                       std::map<int, double> finals, std::vector<FstArc> arcs)
    : grammar_id_(std::move(grammar_id)),
      symbols_(std::move(symbols)),
      num_states_(num_states),
      finals_(std::move(finals)),
      arcs_(std::move(arcs)) {
  std::stable_sort(arcs_.begin(), arcs_.end(),
                   [](const FstArc& a, const FstArc& b) { return a.from < b.from; });
  offsets_.assign(static_cast<std::size_t>(num_states_) + 1, 0);
  for (const auto& arc : arcs_) {
    if (arc.from < 0 || arc.from >= num_states_ || arc.to < 0 || arc.to >= num_states_) {
      throw Error(ErrorCode::kInvalidArgument, "arc references a missing state");
    }
    if (!(arc.weight >= 0.0) || !std::isfinite(arc.weight)) {
      throw Error(ErrorCode::kInvalidArgument, "arc weight must be finite and >= 0");
    }
    ++offsets_[static_cast<std::size_t>(arc.from) + 1];
  }
  for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
}

std::span<const FstArc> GrammarFst::arcs_from(int state) const {
  auto begin = offsets_.at(static_cast<std::size_t>(state));
  auto end = offsets_.at(static_cast<std::size_t>(state) + 1);
  return std::span<const FstArc>(arcs_).subspan(begin, end - begin);
}

double GrammarFst::final_weight(int state) const {
  auto it = finals_.find(state);
  return it == finals_.end() ? std::numeric_limits<double>::infinity() : it->second;
}

namespace {

class FsmBuilder {
 public:
  explicit FsmBuilder(const GrammarAst& ast) : ast_(ast) {}

  Fsm build(bool silence) {
    fsm_.start = new_state();
    std::vector<const Expr*> branches;
    for (const auto& name : ast_.public_rules) branches.push_back(&ast_.rules.at(name));
    Expr silence_token = Expr::token(kSilenceWord);
    if (silence) branches.push_back(&silence_token);
    if (branches.size() == 1) {
      fsm_.finals.insert(emit(*branches.front(), fsm_.start));
    } else {
      int join = new_state();
      for (const Expr* branch : branches) {
        int entry = new_state();
        add_arc(fsm_.start, kEpsilon, entry);
        add_arc(emit(*branch, entry), kEpsilon, join);
      }
      fsm_.finals.insert(join);
    }
    return std::move(fsm_);
  }

 private:
  int new_state() { return fsm_.num_states++; }
  void add_arc(int from, int label, int to) { fsm_.arcs.push_back({from, label, to}); }

  // Emits `expr` starting at the fresh state `from`; returns its end state.
  int emit(const Expr& expr, int from) {
    switch (expr.kind) {
      case Expr::Kind::kToken: {
        int to = new_state();
        add_arc(from, fsm_.symbols.add(expr.text), to);
        return to;
      }
      case Expr::Kind::kRuleRef:
        return emit(ast_.rules.at(expr.text), from);
      case Expr::Kind::kSequence: {
        int current = from;
        for (const auto& item : expr.children) current = emit(item, current);
        return current;
      }
      case Expr::Kind::kAlternation: {
        int join = new_state();
        for (const auto& branch : expr.children) {
          int entry = new_state();
          add_arc(from, kEpsilon, entry);
          add_arc(emit(branch, entry), kEpsilon, join);
        }
        return join;
      }
      case Expr::Kind::kOptional: {
        int join = new_state();
        int entry = new_state();
        add_arc(from, kEpsilon, entry);
        add_arc(emit(expr.children.front(), entry), kEpsilon, join);
        add_arc(from, kEpsilon, join);
        return join;
      }
    }
    return from;
  }

  const GrammarAst& ast_;
  Fsm fsm_;
};

}  // namespace

Fsm build_fsm(const GrammarAst& ast, bool silence) {
  validate(ast);
  return FsmBuilder(ast).build(silence);
}

GrammarFst fsm_to_fst(const Fsm& fsm, std::string grammar_id) {
  const int n = fsm.num_states;
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < fsm.arcs.size(); ++i) {
    out[static_cast<std::size_t>(fsm.arcs[i].from)].push_back(i);
  }
  auto arc_weight = [&](const Fsm::Arc& arc) {
    return std::log(static_cast<double>(out[static_cast<std::size_t>(arc.from)].size()));
  };

  // Epsilon closures with shortest distances; the FSM is acyclic.
  std::vector<std::map<int, double>> closure(static_cast<std::size_t>(n));
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  std::function<void(int)> close = [&](int state) {
    auto s = static_cast<std::size_t>(state);
    if (done[s]) return;
    auto& result = closure[s];
    result[state] = 0.0;
    for (std::size_t index : out[s]) {
      const auto& arc = fsm.arcs[index];
      if (arc.label != kEpsilon) continue;
      close(arc.to);
      double w = arc_weight(arc);
      for (const auto& [target, d] : closure[static_cast<std::size_t>(arc.to)]) {
        auto [it, inserted] = result.emplace(target, w + d);
        if (!inserted) it->second = std::min(it->second, w + d);
      }
    }
    done[s] = true;
  };

  // Final symbol ids in sorted word order ("!SIL" sorts before letters).
  std::vector<std::string> sorted_words(fsm.symbols.words().begin() + 1, fsm.symbols.words().end());
  std::sort(sorted_words.begin(), sorted_words.end());
  SymbolTable symbols;
  for (const auto& word : sorted_words) symbols.add(word);
  auto remap = [&](int label) { return *symbols.find(fsm.symbols.word(label)); };

  // Epsilon-free arcs keyed (from, label, to) keeping the cheapest weight.
  std::map<std::tuple<int, int, int>, double> merged;
  std::vector<double> finals(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  for (int p = 0; p < n; ++p) {
    close(p);
    for (const auto& [q, d] : closure[static_cast<std::size_t>(p)]) {
      if (fsm.finals.count(q)) finals[static_cast<std::size_t>(p)] = std::min(finals[static_cast<std::size_t>(p)], d);
      for (std::size_t index : out[static_cast<std::size_t>(q)]) {
        const auto& arc = fsm.arcs[index];
        if (arc.label == kEpsilon) continue;
        double w = d + arc_weight(arc);
        auto key = std::make_tuple(p, remap(arc.label), arc.to);
        auto [it, inserted] = merged.emplace(key, w);
        if (!inserted) it->second = std::min(it->second, w);
      }
    }
  }

  std::vector<std::vector<std::tuple<int, int, double>>> next(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> prev(static_cast<std::size_t>(n));
  for (const auto& [key, w] : merged) {
    auto [from, label, to] = key;
    next[static_cast<std::size_t>(from)].emplace_back(label, to, w);
    prev[static_cast<std::size_t>(to)].push_back(from);
  }

  // Trim to states that are both accessible and coaccessible.
  std::vector<bool> coaccessible(static_cast<std::size_t>(n), false);
  std::deque<int> queue;
  for (int s = 0; s < n; ++s) {
    if (std::isfinite(finals[static_cast<std::size_t>(s)])) {
      coaccessible[static_cast<std::size_t>(s)] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int p : prev[static_cast<std::size_t>(s)]) {
      if (!coaccessible[static_cast<std::size_t>(p)]) {
        coaccessible[static_cast<std::size_t>(p)] = true;
        queue.push_back(p);
      }
    }
  }

  std::vector<int> renumber(static_cast<std::size_t>(n), -1);
  std::vector<int> order;
  if (coaccessible[static_cast<std::size_t>(fsm.start)]) {
    renumber[static_cast<std::size_t>(fsm.start)] = 0;
    order.push_back(fsm.start);
  }
  std::vector<FstArc> arcs;
  std::map<int, double> final_weights;
  for (std::size_t i = 0; i < order.size(); ++i) {
    int old_state = order[i];
    auto& successors = next[static_cast<std::size_t>(old_state)];
    std::sort(successors.begin(), successors.end());
    for (const auto& [label, to, w] : successors) {
      if (!coaccessible[static_cast<std::size_t>(to)]) continue;
      if (renumber[static_cast<std::size_t>(to)] < 0) {
        renumber[static_cast<std::size_t>(to)] = static_cast<int>(order.size());
        order.push_back(to);
      }
      arcs.push_back({static_cast<int>(i), renumber[static_cast<std::size_t>(to)], label, label, w});
    }
    double fw = finals[static_cast<std::size_t>(old_state)];
    if (std::isfinite(fw)) final_weights[static_cast<int>(i)] = fw;
  }
  if (order.empty()) throw Error(ErrorCode::kInvalidArgument, "grammar accepts no sentence");
  return GrammarFst(std::move(grammar_id), std::move(symbols), static_cast<int>(order.size()),
                    std::move(final_weights), std::move(arcs));
}

GrammarFst compile_grammar(const GrammarAst& ast, bool silence, std::string grammar_id) {
  return fsm_to_fst(build_fsm(ast, silence), std::move(grammar_id));
}

GrammarFst compile_grammar(const GrammarAst& ast, bool silence) {
  return compile_grammar(ast, silence, ast.name);
}

std::set<std::string> enumerate_language(const GrammarFst& fst, std::size_t limit) {
  std::set<std::string> sentences;
  std::vector<int> words;
  std::function<void(int)> walk = [&](int state) {
    if (words.size() > static_cast<std::size_t>(fst.num_states())) {
      throw Error(ErrorCode::kInvalidArgument, "cycle in grammar FST");
    }
    if (fst.is_final(state)) {
      std::string sentence;
      for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) sentence += ' ';
        sentence += fst.symbols().word(words[i]);
      }
      sentences.insert(std::move(sentence));
      if (sentences.size() > limit) {
        throw Error(ErrorCode::kLimitExceeded,
                    "language of " + fst.grammar_id() + " exceeds " + std::to_string(limit));
      }
    }
    for (const auto& arc : fst.arcs_from(state)) {
      bool emits = arc.olabel != kEpsilon;
      if (emits) words.push_back(arc.olabel);
      walk(arc.to);
      if (emits) words.pop_back();
    }
  };
  walk(fst.start());
  return sentences;
}

void attach_lexicon(GrammarFst& fst, const Lexicon& lexicon) {
  std::map<std::string, Pronunciation> prons;
  for (std::size_t id = 1; id < fst.symbols().size(); ++id) {
    const auto& word = fst.symbols().word(static_cast<int>(id));
    prons.emplace(word, lexicon.lookup(word));
  }
  fst.set_pronunciations(std::move(prons));
}

}  // namespace robospeech::grammar
