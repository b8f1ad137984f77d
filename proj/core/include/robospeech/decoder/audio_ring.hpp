#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "robospeech/decoder/frame.hpp"

namespace robospeech::decoder {

// Fixed-capacity frame history addressed by absolute frame index. The frame
// at index i is readable iff cursor() - capacity() <= i < cursor().
class AudioRing {
 public:
  explicit AudioRing(std::size_t capacity);

  // Appends a frame whose index must exceed every earlier one
  // (Error(kOutOfOrderFrame) otherwise). Skipped indices are filled with
  // silence frames so the index space stays dense.
  void push(const ObservationFrame& frame);

  const ObservationFrame& at(std::int64_t index) const;
  bool readable(std::int64_t index) const { return index >= floor() && index < cursor_; }

  std::int64_t cursor() const { return cursor_; }
  std::int64_t floor() const;
  std::size_t capacity() const { return slots_.size(); }

 private:
  std::vector<ObservationFrame> slots_;
  std::int64_t cursor_ = 0;
  bool empty_ = true;
};

}  // namespace robospeech::decoder
