#pragma once

#include <utility>
#include <vector>

namespace robospeech::dialogue {

struct SpeedSample {
  double speed = 0.0;  // |v| in m/s
  double dt = 0.0;     // seconds covered by this sample
};

// Kinetic-energy stub: E = sum of 0.5 * m * |v|^2 * dt. Throws
// Error(kNegativeInput) for negative speed or mass, or dt <= 0.
double compute_energy(const std::vector<SpeedSample>& samples, double mass_kg);

inline constexpr double kBasePitchHz = 220.0;
inline constexpr double kMaxPitchHz = 880.0;
inline constexpr double kPitchSpeedScale = 1.0;  // m/s

// 880 - 660 * exp(-speed / 1 m/s): 220 Hz at rest, rising towards 880 Hz.
// Throws Error(kNegativeInput) for negative speed.
double pitch_for_speed(double speed);

}  // namespace robospeech::dialogue
