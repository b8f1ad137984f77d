#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/segment.hpp"

namespace robospeech::eval {

inline constexpr double kDefaultTolerance = 0.05;

// Open-interval overlap: a.start < b.end && b.start < a.end.
bool overlaps(const UtteranceSegment& a, const UtteranceSegment& b);
// |start difference| + |end difference|.
double boundary_distance(const UtteranceSegment& a, const UtteranceSegment& b);

// For each gold segment (processed in time order), the index of its matched
// automatic segment: first an unused overlapping segment with the same text,
// otherwise the unused overlapping segment at minimum boundary distance.
// Each automatic segment is used at most once; ties go to the earlier one.
std::vector<std::optional<std::size_t>> match_segments(const std::vector<UtteranceSegment>& gold,
                                                       const std::vector<UtteranceSegment>& automatic);

struct SegmentationErrorLabel {
  bool early_start = false;
  bool late_start = false;
  bool early_end = false;
  bool late_end = false;

  bool aligned() const { return !early_start && !late_start && !early_end && !late_end; }
  std::string to_string() const;  // e.g. "early_start,late_end" or "aligned"

  bool operator==(const SegmentationErrorLabel&) const = default;
};

// Throws Error(kNoOverlap) if the segments do not overlap.
SegmentationErrorLabel classify_segment_errors(const UtteranceSegment& gold,
                                               const UtteranceSegment& automatic,
                                               double tolerance = kDefaultTolerance);

}  // namespace robospeech::eval
