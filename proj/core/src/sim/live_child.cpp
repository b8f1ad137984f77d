#include "robospeech/sim/live_child.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <optional>
#include <random>
#include <thread>

#include "robospeech/decoder/frame.hpp"
#include "robospeech/dialogue/energy.hpp"
#include "robospeech/dialogue/node.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/sim/corrupt.hpp"
#include "robospeech/sim/session.hpp"
#include "robospeech/topics.hpp"

namespace robospeech::sim {

using dialogue::StateId;

LiveChild::LiveChild(dialogue::DialogueScript script, const grammar::GrammarLibrary& library,
                     LiveChildOptions options)
    : script_(std::move(script)),
      library_(library),
      options_(std::move(options)),
      frames_out_(portnet::Port::open(options_.broker, topics::kAudioFrames, portnet::Direction::kOut)),
      energy_out_(portnet::Port::open(options_.broker, topics::kEnergy, portnet::Direction::kOut)),
      say_in_(portnet::subscribe(options_.broker, topics::kRobotSay)),
      state_in_(portnet::subscribe(options_.broker, topics::kDialogueState)) {}

std::vector<std::string> LiveChild::spoken() const {
  std::lock_guard lock(mutex_);
  return spoken_;
}

std::vector<eval::GoldEntry> LiveChild::gold() const {
  std::lock_guard lock(mutex_);
  return gold_;
}

void LiveChild::run() {
  using Clock = std::chrono::steady_clock;

  const double fps = options_.frame_rate;
  auto ticks = [fps](double seconds) { return static_cast<std::int64_t>(std::llround(seconds * fps)); };
  auto at = [fps](std::int64_t tick) { return static_cast<double>(tick) / fps; };
  std::mt19937_64 rng(mix_seed(options_.seed, 1));
  std::mt19937_64 speeds(mix_seed(options_.seed, 4));

  std::optional<StateId> state;
  std::int64_t robot_end = -1;       // tick the current robot turn finishes
  std::int64_t energy_due = -1;
  std::deque<decoder::ObservationFrame> pending;
  std::uint64_t utterances = 0;
  bool answer_due = false;

  const auto start = Clock::now();
  const std::int64_t cap = ticks(options_.max_duration);
  for (std::int64_t tick = 0; tick < cap && !stop_; ++tick) {
    auto due = start + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(static_cast<double>(tick) / fps * options_.time_scale));
    std::this_thread::sleep_until(due);

    while (auto m = state_in_.next_message(0.0)) {
      state = dialogue::state_from_name(m->payload);
      if (state == StateId::kSession1) energy_due = tick + ticks(script_.state(*state).seconds);
    }
    while (auto m = say_in_.next_message(0.0)) {
      robot_end = tick + ticks(dialogue::speech_duration(m->payload));
      answer_due = true;
      std::lock_guard lock(mutex_);
      gold_.push_back({{at(tick), at(robot_end), m->payload, SegmentSource::kGold}, eval::kRobotSpeaker});
    }
    if (state && (*state == StateId::kFarewell || *state == StateId::kAborted) && robot_end >= 0 &&
        tick > robot_end + ticks(1.0)) {
      break;
    }

    if (answer_due && tick >= robot_end && state) {
      answer_due = false;
      const auto& s = script_.state(*state);
      if (dialogue::expects_speech(*state) && !s.choices.empty()) {
        std::size_t pick = std::uniform_int_distribution<std::size_t>(0, s.choices.size() - 1)(rng);
        std::vector<decoder::ObservationFrame> frames;
        std::int64_t index = tick;
        for (const auto& w : eval::split_words(s.choices[pick])) {
          for (int f = 0; f < options_.frames_per_word; ++f) frames.push_back(decoder::word_frame(index++, w));
        }
        if (options_.confusion > 0.0) {
          frames = corrupt_observations(frames, options_.confusion, mix_seed(options_.seed, 1000 + utterances),
                                        confusable_sets(*library_.get(s.grammar)));
        }
        ++utterances;
        pending.insert(pending.end(), frames.begin(), frames.end());
        std::lock_guard lock(mutex_);
        spoken_.push_back(s.choices[pick]);
        gold_.push_back({{at(tick), at(index), s.choices[pick], SegmentSource::kGold}, kChildSpeaker});
      } else if (dialogue::is_session(*state) && *state != StateId::kSession1) {
        energy_due = tick + ticks(s.seconds);
      }
    }

    if (energy_due >= 0 && tick >= energy_due && state && dialogue::is_session(*state)) {
      energy_due = -1;
      static constexpr double kLevels[] = {0.05, 0.6, 1.4, 1.6};
      double level = kLevels[dialogue::ordinal(*state) - 1];
      std::normal_distribution<double> jitter(0.0, 0.1 * level + 0.01);
      std::vector<dialogue::SpeedSample> samples;
      for (double t = 0.0; t < script_.state(*state).seconds; t += 1.0 / 30.0) {
        samples.push_back({std::abs(level + jitter(speeds)), 1.0 / 30.0});
      }
      energy_out_.publish(std::to_string(dialogue::compute_energy(samples, options_.arm_mass)));
    }

    decoder::ObservationFrame frame = decoder::silence_frame(tick);
    if (!pending.empty() && pending.front().index == tick) {
      frame = std::move(pending.front());
      pending.pop_front();
    }
    frames_out_.publish(decoder::frame_to_json(frame));
  }
}

}  // namespace robospeech::sim
