#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace robospeech::decoder {

// One symbolic acoustic observation: a posterior distribution over word
// symbols (including "!SIL" for non-speech) for frame `index`.
struct ObservationFrame {
  std::int64_t index = 0;
  std::map<std::string, double> posteriors;

  double posterior(const std::string& symbol) const;

  // Throws Error(kInvalidArgument) unless every probability is in [0,1] and
  // they sum to 1 within 1e-6.
  void validate() const;

  bool operator==(const ObservationFrame&) const = default;
};

ObservationFrame silence_frame(std::int64_t index);
ObservationFrame word_frame(std::int64_t index, const std::string& word);

// JSON object `{"i": n, "p": {...}}` as used on the wire and in records.
std::string frame_to_json(const ObservationFrame& frame);
ObservationFrame frame_from_json(const std::string& text);

}  // namespace robospeech::decoder
