#pragma once

#include <string>

namespace robospeech {

enum class SegmentSource { kGold, kAuto };

// A timed, transcribed span: the common currency of decoder output, gold
// annotations and evaluation. Times are seconds since session start.
struct UtteranceSegment {
  double start = 0.0;
  double end = 0.0;
  std::string text;
  SegmentSource source = SegmentSource::kAuto;

  bool operator==(const UtteranceSegment&) const = default;
};

inline constexpr const char* kSilenceWord = "!SIL";

}  // namespace robospeech
