#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/decoder/frame.hpp"
#include "robospeech/grammar/fst.hpp"

namespace robospeech::decoder {

inline constexpr double kInfCost = std::numeric_limits<double>::infinity();

// A word on the decoded path with its frame span [start_frame, end_frame).
struct WordAlignment {
  std::string word;
  std::int64_t start_frame = 0;
  std::int64_t end_frame = 0;

  bool operator==(const WordAlignment&) const = default;
};

struct Hypothesis {
  std::vector<WordAlignment> words;
  double cost = kInfCost;  // arc weights + final weight + sum of -ln posterior
  bool complete = false;   // ends in a final state (possibly followed by silence)
  bool in_trailing_silence = false;

  std::string text() const;
};

// Token-passing Viterbi over one utterance window. Search states are: a
// leading-silence state, one state per FST arc (a word being spoken, with a
// self-loop), and one trailing-silence state per final FST state. Leading and
// trailing silence consume the "!SIL" posterior.
class ViterbiSearch {
 public:
  // beam = maximum number of live search states kept per frame; 0 = unlimited.
  ViterbiSearch(std::shared_ptr<const grammar::GrammarFst> fst, std::size_t beam);

  void advance(const ObservationFrame& frame);

  std::size_t frames_decoded() const { return frames_; }
  // Best hypothesis over all live states (partial result).
  Hypothesis best() const;
  // Best hypothesis that ends in a final state, if any.
  std::optional<Hypothesis> best_complete() const;


 private:
  struct Token {
    double cost = kInfCost;
    int trace = -1;  // index into trace_, -1 = no word yet
  };
  struct Trace {
    int word = 0;     // symbol id, or -1 where trailing silence begins
    int parent = -1;
    std::int64_t start_frame = 0;
  };

  int lead_slot() const { return 0; }
  int arc_slot(std::size_t arc) const { return 1 + static_cast<int>(arc); }
  int trail_slot(int final_index) const {
    return 1 + static_cast<int>(fst_->arcs().size()) + final_index;
  }
  int best_slot() const;
  Hypothesis hypothesis(int slot, double extra_cost) const;
  void prune();

  std::shared_ptr<const grammar::GrammarFst> fst_;
  std::size_t beam_;
  int silence_symbol_ = -1;
  std::vector<int> final_states_;
  std::vector<int> final_index_;           // state -> index in final_states_ or -1
  std::vector<std::vector<int>> entering_; // state -> arcs ending there
  std::vector<Token> tokens_;
  std::vector<Token> next_;
  std::vector<Trace> traces_;
  std::vector<double> costs_;  // per symbol id for the current frame
  bool at_start_ = true;
  std::size_t frames_ = 0;
  std::int64_t last_index_ = -1;
};

}  // namespace robospeech::decoder
