#include "robospeech/eval/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "robospeech/error.hpp"

namespace robospeech::eval {
namespace {
// Boundaries are compared on frame-quantized times; this absorbs rounding in
// differences such as 2.05 - 2.00.
constexpr double kSlack = 1e-9;
}  // namespace

bool overlaps(const UtteranceSegment& a, const UtteranceSegment& b) {
  return a.start < b.end && b.start < a.end;
}

double boundary_distance(const UtteranceSegment& a, const UtteranceSegment& b) {
  return std::abs(a.start - b.start) + std::abs(a.end - b.end);
}

std::vector<std::optional<std::size_t>> match_segments(const std::vector<UtteranceSegment>& gold,
                                                       const std::vector<UtteranceSegment>& automatic) {
  std::vector<std::size_t> order(gold.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return gold[a].start < gold[b].start;
  });
  std::vector<bool> used(automatic.size(), false);
  std::vector<std::optional<std::size_t>> matches(gold.size());
  for (std::size_t g : order) {
    auto pick = [&](bool same_text) {
      std::optional<std::size_t> best;
      for (std::size_t a = 0; a < automatic.size(); ++a) {
        if (used[a] || !overlaps(gold[g], automatic[a])) continue;
        if (same_text && automatic[a].text != gold[g].text) continue;
        if (!best || boundary_distance(gold[g], automatic[a]) < boundary_distance(gold[g], automatic[*best])) {
          best = a;
        }
      }
      return best;
    };
    auto match = pick(true);
    if (!match) match = pick(false);
    if (match) used[*match] = true;
    matches[g] = match;
  }
  return matches;
}

std::string SegmentationErrorLabel::to_string() const {
  std::string out;
  auto add = [&](bool flag, const char* name) {
    if (!flag) return;
    if (!out.empty()) out += ',';
    out += name;
  };
  add(early_start, "early_start");
  add(late_start, "late_start");
  add(early_end, "early_end");
  add(late_end, "late_end");
  return out.empty() ? "aligned" : out;
}

SegmentationErrorLabel classify_segment_errors(const UtteranceSegment& gold,
                                               const UtteranceSegment& automatic, double tolerance) {
  if (!overlaps(gold, automatic)) throw Error(ErrorCode::kNoOverlap, "segments do not overlap");
  SegmentationErrorLabel label;
  label.early_start = automatic.start < gold.start - tolerance - kSlack;
  label.late_start = automatic.start > gold.start + tolerance + kSlack;
  label.early_end = automatic.end < gold.end - tolerance - kSlack;
  label.late_end = automatic.end > gold.end + tolerance + kSlack;
  return label;
}

}  // namespace robospeech::eval
