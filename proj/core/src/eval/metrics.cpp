#include "robospeech/eval/metrics.hpp"

#include <cmath>

#include "robospeech/error.hpp"

namespace robospeech::eval {

double accuracy(std::size_t correct, std::size_t total) {
  if (total == 0) throw Error(ErrorCode::kZeroTotal, "accuracy over zero utterances");
  if (correct > total) throw Error(ErrorCode::kInvalidArgument, "correct exceeds total");
  return std::round(1000.0 * static_cast<double>(correct) / static_cast<double>(total)) / 10.0;
}

EditCounts edit_distance(const std::vector<std::string>& reference,
                         const std::vector<std::string>& hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  std::vector<std::vector<EditCounts>> table(n + 1, std::vector<EditCounts>(m + 1));
  for (std::size_t i = 1; i <= n; ++i) table[i][0] = {0, i, 0};
  for (std::size_t j = 1; j <= m; ++j) table[0][j] = {0, 0, j};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      EditCounts diag = table[i - 1][j - 1];
      if (reference[i - 1] != hypothesis[j - 1]) ++diag.substitutions;
      EditCounts del = table[i - 1][j];
      ++del.deletions;
      EditCounts ins = table[i][j - 1];
      ++ins.insertions;
      EditCounts best = diag;
      if (del.total() < best.total()) best = del;
      if (ins.total() < best.total()) best = ins;
      table[i][j] = best;
    }
  }
  return table[n][m];
}

double wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis) {
  if (reference.empty()) throw Error(ErrorCode::kEmptyReference, "empty reference");
  return 100.0 * static_cast<double>(edit_distance(reference, hypothesis).total()) /
         static_cast<double>(reference.size());
}

}  // namespace robospeech::eval
