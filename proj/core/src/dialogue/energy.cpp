#include "robospeech/dialogue/energy.hpp"

#include <cmath>

#include "robospeech/error.hpp"

namespace robospeech::dialogue {

double compute_energy(const std::vector<SpeedSample>& samples, double mass_kg) {
  if (!(mass_kg >= 0.0)) throw Error(ErrorCode::kNegativeInput, "mass must be >= 0");
  double joules = 0.0;
  for (const auto& s : samples) {
    if (!(s.speed >= 0.0)) throw Error(ErrorCode::kNegativeInput, "speed must be >= 0");
    if (!(s.dt > 0.0)) throw Error(ErrorCode::kNegativeInput, "dt must be > 0");
    joules += 0.5 * mass_kg * s.speed * s.speed * s.dt;
  }
  return joules;
}

double pitch_for_speed(double speed) {
  if (!(speed >= 0.0)) throw Error(ErrorCode::kNegativeInput, "speed must be >= 0");
  return kMaxPitchHz - (kMaxPitchHz - kBasePitchHz) * std::exp(-speed / kPitchSpeedScale);
}

}  // namespace robospeech::dialogue
