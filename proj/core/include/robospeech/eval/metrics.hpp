#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace robospeech::eval {

// 100 * correct / total rounded to one decimal. Throws Error(kZeroTotal) for
// total == 0 and Error(kInvalidArgument) for correct > total.
double accuracy(std::size_t correct, std::size_t total);

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;

  std::size_t total() const { return substitutions + deletions + insertions; }
};

// Minimum-cost alignment by dynamic programming; among equal-cost
// alignments prefers substitutions, then deletions.
EditCounts edit_distance(const std::vector<std::string>& reference,
                         const std::vector<std::string>& hypothesis);

// 100 * (S + D + I) / |reference|. Throws Error(kEmptyReference).
double wer(const std::vector<std::string>& reference, const std::vector<std::string>& hypothesis);

}  // namespace robospeech::eval
