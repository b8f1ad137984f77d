#include "robospeech/decoder/audio_ring.hpp"

#include <algorithm>

#include "robospeech/error.hpp"

namespace robospeech::decoder {

AudioRing::AudioRing(std::size_t capacity) : slots_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::kInvalidArgument, "ring capacity must be positive");
}

void AudioRing::push(const ObservationFrame& frame) {
  if (!empty_ && frame.index < cursor_) {
    throw Error(ErrorCode::kOutOfOrderFrame, "frame " + std::to_string(frame.index) +
                                                 " after frame " + std::to_string(cursor_ - 1));
  }
  if (frame.index < 0) throw Error(ErrorCode::kOutOfOrderFrame, "negative frame index");
  auto cap = static_cast<std::int64_t>(slots_.size());
  // Gap filling only needs to touch the last `capacity` indices.
  for (std::int64_t i = std::max(cursor_, frame.index - cap); i < frame.index; ++i) {
    slots_[static_cast<std::size_t>(i % cap)] = silence_frame(i);
  }
  slots_[static_cast<std::size_t>(frame.index % cap)] = frame;
  cursor_ = frame.index + 1;
  empty_ = false;
}

const ObservationFrame& AudioRing::at(std::int64_t index) const {
  if (index >= cursor_) {
    throw Error(ErrorCode::kInvalidArgument, "frame " + std::to_string(index) + " not yet fed");
  }
  if (index < floor()) {
    throw Error(ErrorCode::kEvictedFrame, "frame " + std::to_string(index) + " evicted");
  }
  return slots_[static_cast<std::size_t>(index % static_cast<std::int64_t>(slots_.size()))];
}

std::int64_t AudioRing::floor() const {
  return std::max<std::int64_t>(0, cursor_ - static_cast<std::int64_t>(slots_.size()));
}

}  // namespace robospeech::decoder
