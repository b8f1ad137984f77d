#include "robospeech/decoder/frame.hpp"

#include <cmath>
#include <nlohmann/json.hpp>

#include "robospeech/error.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::decoder {

double ObservationFrame::posterior(const std::string& symbol) const {
  auto it = posteriors.find(symbol);
  return it == posteriors.end() ? 0.0 : it->second;
}

void ObservationFrame::validate() const {
  double sum = 0.0;
  for (const auto& [symbol, p] : posteriors) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "frame " + std::to_string(index) + ": probability of " + symbol + " outside [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) >= 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                "frame " + std::to_string(index) + ": posteriors sum to " + std::to_string(sum));
  }
}

ObservationFrame silence_frame(std::int64_t index) { return word_frame(index, kSilenceWord); }

ObservationFrame word_frame(std::int64_t index, const std::string& word) {
  return ObservationFrame{index, {{word, 1.0}}};
}

std::string frame_to_json(const ObservationFrame& frame) {
  nlohmann::json j;
  j["i"] = frame.index;
  j["p"] = frame.posteriors;
  return j.dump();
}

ObservationFrame frame_from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    ObservationFrame frame;
    frame.index = j.at("i").get<std::int64_t>();
    frame.posteriors = j.at("p").get<std::map<std::string, double>>();
    return frame;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedRecord, e.what());
  }
}

}  // namespace robospeech::decoder
