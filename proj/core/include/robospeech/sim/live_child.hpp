#pragma once

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "robospeech/dialogue/script.hpp"
#include "robospeech/eval/transcript.hpp"
#include "robospeech/grammar/library.hpp"
#include "robospeech/portnet/client.hpp"

namespace robospeech::sim {

struct LiveChildOptions {
  portnet::Endpoint broker;
  std::uint64_t seed = 1;
  double confusion = 0.0;
  int frames_per_word = 30;
  double frame_rate = 100.0;
  double time_scale = 1.0;     // wall seconds per session second
  double arm_mass = 2.0;
  double max_duration = 1800.0;
};

// The simulated child and microphone on portnet: streams observation frames
// on /Audio/Frames in (scaled) real time, answers after each robot turn that
// expects speech, and reports exercise energy on /SceneAnalyzer/Energy.
class LiveChild {
 public:
  // Opens its ports right away, so nothing published after construction
  // is missed.
  LiveChild(dialogue::DialogueScript script, const grammar::GrammarLibrary& library,
            LiveChildOptions options);

  // Returns once Farewell or Aborted has been reached and the robot's last
  // turn is over, after max_duration, or after stop().
  void run();
  void stop() { stop_ = true; }

  // Phrases spoken so far.
  std::vector<std::string> spoken() const;
  // Child utterances and robot turns in frame time, as a gold annotation.
  std::vector<eval::GoldEntry> gold() const;

 private:
  dialogue::DialogueScript script_;
  const grammar::GrammarLibrary& library_;
  LiveChildOptions options_;
  portnet::Port frames_out_, energy_out_, say_in_, state_in_;
  std::atomic<bool> stop_{false};
  mutable std::mutex mutex_;
  std::vector<std::string> spoken_;
  std::vector<eval::GoldEntry> gold_;
};

}  // namespace robospeech::sim
