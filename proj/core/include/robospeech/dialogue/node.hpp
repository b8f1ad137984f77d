#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "robospeech/dialogue/machine.hpp"
#include "robospeech/portnet/client.hpp"

namespace robospeech::dialogue {

inline constexpr double kWordsPerSecond = 2.5;

// Seconds the robot needs to speak `text` (word count / 2.5).
double speech_duration(const std::string& text);

// Consecutive say actions of one transition form a single robot turn.
std::string robot_turn_text(const std::vector<TransitionAction>& actions);

// Operator command payloads on /Operator/Command: "wizard <text>" | "abort".
std::optional<DialogueEvent> parse_operator_command(const std::string& payload);

struct DialogueNodeOptions {
  portnet::Endpoint broker;
  // Delay between the robot finishing a turn and the end-of-speech message.
  double eos_delay = 0.0;
  // Multiplies every wall-clock duration (speech, timers); < 1 runs faster.
  double time_scale = 1.0;
};

// Real-time dialogue manager on portnet. Subscribes to recognition results,
// operator commands and exercise energy; plays the robot by publishing
// /Robot/Say and /Robot/SpeechStatus start/end around each spoken turn.
class DialogueNode {
 public:
  DialogueNode(DialogueMachine machine, DialogueNodeOptions options);
  ~DialogueNode();

  // Runs until Farewell or Aborted has been reached and its turn spoken, or
  // stop() is called.
  void run();
  void stop();

  // States entered so far, in order (for tests and logging).
  std::vector<StateId> trace() const;
  DialogueState state() const;

 private:
  using Clock = std::chrono::steady_clock;
  struct Timer {
    Clock::time_point due;
    enum class Kind { kSpeechEnd, kResponse } kind;
    std::uint64_t epoch = 0;
  };

  void reader(portnet::Port& port);
  void push(DialogueEvent event);
  void apply(const Transition& transition);
  double session_time() const;
  Clock::duration scaled(double seconds) const;

  DialogueMachine machine_;
  DialogueNodeOptions options_;
  Clock::time_point started_;
  std::atomic<bool> stop_{false};

  std::vector<portnet::Port> inputs_;
  std::vector<std::thread> readers_;
  std::unique_ptr<portnet::Port> say_, speech_status_, grammar_, display_, state_port_;

  mutable std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<DialogueEvent> events_;
  DialogueState state_;
  std::vector<StateId> trace_;
  std::vector<Timer> timers_;
  bool robot_speaking_ = false;
};

}  // namespace robospeech::dialogue
