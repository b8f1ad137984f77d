#include "robospeech/decoder/search.hpp"

#include <algorithm>
#include <cmath>

#include "robospeech/error.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::decoder {

std::string Hypothesis::text() const {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w.word;
  }
  return out;
}

ViterbiSearch::ViterbiSearch(std::shared_ptr<const grammar::GrammarFst> fst, std::size_t beam)
    : fst_(std::move(fst)), beam_(beam) {
  if (!fst_) throw Error(ErrorCode::kNoGrammar, "search needs a grammar");
  if (auto id = fst_->symbols().find(kSilenceWord)) silence_symbol_ = *id;
  final_index_.assign(static_cast<std::size_t>(fst_->num_states()), -1);
  for (const auto& [state, weight] : fst_->finals()) {
    final_index_[static_cast<std::size_t>(state)] = static_cast<int>(final_states_.size());
    final_states_.push_back(state);
  }
  entering_.resize(static_cast<std::size_t>(fst_->num_states()));
  const auto& arcs = fst_->arcs();
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    entering_[static_cast<std::size_t>(arcs[a].to)].push_back(static_cast<int>(a));
  }
  tokens_.resize(1 + arcs.size() + final_states_.size());
  next_.resize(tokens_.size());
  costs_.resize(fst_->symbols().size());
}

void ViterbiSearch::advance(const ObservationFrame& frame) {
  const auto& symbols = fst_->symbols();
  for (std::size_t id = 0; id < costs_.size(); ++id) {
    double p = id == 0 ? 0.0 : frame.posterior(symbols.word(static_cast<int>(id)));
    costs_[id] = p > 0.0 ? -std::log(p) : kInfCost;
  }
  double silence_cost = kInfCost;
  if (silence_symbol_ >= 0) {
    silence_cost = costs_[static_cast<std::size_t>(silence_symbol_)];
  } else {
    double p = frame.posterior(kSilenceWord);
    silence_cost = p > 0.0 ? -std::log(p) : kInfCost;
  }
  const std::int64_t t = frame.index;
  const auto& arcs = fst_->arcs();
  std::fill(next_.begin(), next_.end(), Token{});

  // Entry point into the start state: the virtual start token on the first
  // frame, leading silence afterwards.
  Token origin = at_start_ ? Token{0.0, -1} : tokens_[lead_slot()];
  if (std::isfinite(origin.cost)) next_[lead_slot()] = {origin.cost + silence_cost, -1};

  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const auto& arc = arcs[a];
    Token best = tokens_[static_cast<std::size_t>(arc_slot(a))];  // self-loop
    bool entered = false;
    auto consider = [&](const Token& from) {
      if (!std::isfinite(from.cost)) return;
      double c = from.cost + arc.weight;
      if (c < best.cost) {
        best = {c, from.trace};
        entered = true;
      }
    };
    if (arc.from == fst_->start()) consider(origin);
    for (int b : entering_[static_cast<std::size_t>(arc.from)]) {
      consider(tokens_[static_cast<std::size_t>(arc_slot(static_cast<std::size_t>(b)))]);
    }
    if (!std::isfinite(best.cost)) continue;
    double c = best.cost + costs_[static_cast<std::size_t>(arc.ilabel)];
    if (!std::isfinite(c)) continue;
    if (entered) {
      traces_.push_back({arc.olabel, best.trace, t});
      best.trace = static_cast<int>(traces_.size()) - 1;
    }
    next_[static_cast<std::size_t>(arc_slot(a))] = {c, best.trace};
  }

  for (std::size_t f = 0; f < final_states_.size(); ++f) {
    int state = final_states_[f];
    Token best = tokens_[static_cast<std::size_t>(trail_slot(static_cast<int>(f)))];
    bool entered = false;
    for (int b : entering_[static_cast<std::size_t>(state)]) {
      const Token& from = tokens_[static_cast<std::size_t>(arc_slot(static_cast<std::size_t>(b)))];
      double c = from.cost + fst_->final_weight(state);
      if (c < best.cost) {
        best = {c, from.trace};
        entered = true;
      }
    }
    if (!std::isfinite(best.cost)) continue;
    double c = best.cost + silence_cost;
    if (!std::isfinite(c)) continue;
    if (entered) {
      traces_.push_back({-1, best.trace, t});
      best.trace = static_cast<int>(traces_.size()) - 1;
    }
    next_[static_cast<std::size_t>(trail_slot(static_cast<int>(f)))] = {c, best.trace};
  }

  tokens_.swap(next_);
  at_start_ = false;
  ++frames_;
  last_index_ = t;
  prune();
}

void ViterbiSearch::prune() {
  if (beam_ == 0) return;
  std::vector<double> live;
  for (const auto& token : tokens_) {
    if (std::isfinite(token.cost)) live.push_back(token.cost);
  }
  if (live.size() <= beam_) return;
  std::nth_element(live.begin(), live.begin() + static_cast<std::ptrdiff_t>(beam_ - 1), live.end());
  double threshold = live[beam_ - 1];
  // Keep the first `beam_` tokens at or under the threshold, in slot order.
  std::size_t kept = 0;
  for (auto& token : tokens_) {
    if (!std::isfinite(token.cost)) continue;
    if (token.cost <= threshold && kept < beam_) {
      ++kept;
    } else {
      token = Token{};
    }
  }
}

int ViterbiSearch::best_slot() const {
  int best = -1;
  for (std::size_t s = 0; s < tokens_.size(); ++s) {
    if (!std::isfinite(tokens_[s].cost)) continue;
    if (best < 0 || tokens_[s].cost < tokens_[static_cast<std::size_t>(best)].cost) {
      best = static_cast<int>(s);
    }
  }
  return best;
}

Hypothesis ViterbiSearch::hypothesis(int slot, double extra_cost) const {
  Hypothesis h;
  const Token& token = tokens_[static_cast<std::size_t>(slot)];
  h.cost = token.cost + extra_cost;
  std::int64_t end = last_index_ + 1;
  std::vector<const Trace*> chain;
  for (int tr = token.trace; tr >= 0; tr = traces_[static_cast<std::size_t>(tr)].parent) {
    chain.push_back(&traces_[static_cast<std::size_t>(tr)]);
  }
  for (const Trace* trace : chain) {
    if (trace->word >= 0) {
      h.words.insert(h.words.begin(),
                     {fst_->symbols().word(trace->word), trace->start_frame, end});
    }
    end = trace->start_frame;
  }
  int trail_begin = trail_slot(0);
  h.in_trailing_silence = slot >= trail_begin;
  if (h.in_trailing_silence) {
    h.complete = true;
  } else if (slot != lead_slot()) {
    const auto& arc = fst_->arcs()[static_cast<std::size_t>(slot - 1)];
    h.complete = fst_->is_final(arc.to);
  }
  return h;
}

Hypothesis ViterbiSearch::best() const {
  int slot = best_slot();
  if (slot < 0) return {};
  return hypothesis(slot, 0.0);
}

std::optional<Hypothesis> ViterbiSearch::best_complete() const {
  std::optional<Hypothesis> best;
  const auto& arcs = fst_->arcs();
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const Token& token = tokens_[static_cast<std::size_t>(arc_slot(a))];
    if (!std::isfinite(token.cost) || !fst_->is_final(arcs[a].to)) continue;
    double c = token.cost + fst_->final_weight(arcs[a].to);
    if (!best || c < best->cost) best = hypothesis(arc_slot(a), fst_->final_weight(arcs[a].to));
  }
  for (std::size_t f = 0; f < final_states_.size(); ++f) {
    int slot = trail_slot(static_cast<int>(f));
    const Token& token = tokens_[static_cast<std::size_t>(slot)];
    if (!std::isfinite(token.cost)) continue;
    if (!best || token.cost < best->cost) best = hypothesis(slot, 0.0);
  }
  return best;
}

}  // namespace robospeech::decoder
