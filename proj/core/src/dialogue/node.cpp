#include "robospeech/dialogue/node.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "robospeech/error.hpp"
#include "robospeech/topics.hpp"

namespace robospeech::dialogue {

double speech_duration(const std::string& text) {
  std::istringstream in(text);
  std::string word;
  int count = 0;
  while (in >> word) ++count;
  return count / kWordsPerSecond;
}

std::string robot_turn_text(const std::vector<TransitionAction>& actions) {
  std::string text;
  for (const auto& a : actions) {
    if (a.kind != TransitionAction::Kind::kSay) continue;
    if (!text.empty()) text += ' ';
    text += a.text;
  }
  return text;
}

std::optional<DialogueEvent> parse_operator_command(const std::string& payload) {
  if (payload == "abort") return DialogueEvent::operator_abort();
  const std::string prefix = "wizard ";
  if (payload.rfind(prefix, 0) == 0 && payload.size() > prefix.size()) {
    return DialogueEvent::wizard(payload.substr(prefix.size()));
  }
  return std::nullopt;
}

DialogueNode::DialogueNode(DialogueMachine machine, DialogueNodeOptions options)
    : machine_(std::move(machine)), options_(std::move(options)), started_(Clock::now()) {
  const auto& broker = options_.broker;
  auto out = [&](const char* topic) {
    return std::make_unique<portnet::Port>(
        portnet::Port::open(broker, topic, portnet::Direction::kOut, [this] { return session_time(); }));
  };
  say_ = out(topics::kRobotSay);
  speech_status_ = out(topics::kRobotSpeech);
  grammar_ = out(topics::kGrammar);
  display_ = out(topics::kDisplay);
  state_port_ = out(topics::kDialogueState);
  for (const char* topic : {topics::kSentence, topics::kOperator, topics::kEnergy}) {
    inputs_.push_back(portnet::subscribe(broker, topic));
  }
  for (auto& port : inputs_) readers_.emplace_back([this, &port] { reader(port); });
}

DialogueNode::~DialogueNode() {
  stop();
  for (auto& r : readers_) {
    if (r.joinable()) r.join();
  }
}

void DialogueNode::stop() {
  stop_ = true;
  wake_.notify_all();
}

double DialogueNode::session_time() const {
  return std::chrono::duration<double>(Clock::now() - started_).count();
}

DialogueNode::Clock::duration DialogueNode::scaled(double seconds) const {
  return std::chrono::duration_cast<Clock::duration>(
      std::chrono::duration<double>(seconds * options_.time_scale));
}

void DialogueNode::reader(portnet::Port& port) {
  const std::string topic = port.name().str();
  while (!stop_) {
    std::optional<portnet::PortMessage> message;
    try {
      message = port.next_message(0.05);
    } catch (const Error&) {
      return;
    }
    if (!message) continue;
    if (topic == topics::kSentence) {
      push(DialogueEvent::recognized(message->payload));
    } else if (topic == topics::kOperator) {
      if (auto event = parse_operator_command(message->payload)) push(*event);
    } else {
      try {
        push(DialogueEvent::energy_session_done(std::stod(message->payload)));
      } catch (const std::exception&) {
      }
    }
  }
}

void DialogueNode::push(DialogueEvent event) {
  {
    std::lock_guard lock(mutex_);
    events_.push_back(std::move(event));
  }
  wake_.notify_all();
}

// Caller holds mutex_.
void DialogueNode::apply(const Transition& transition) {
  bool changed = transition.state.id != state_.id || trace_.empty();
  state_ = transition.state;
  if (changed) {
    trace_.push_back(state_.id);
    state_port_->publish(std::string(state_.name()));
  }
  for (const auto& action : transition.actions) {
    switch (action.kind) {
      case TransitionAction::Kind::kSetGrammar:
        grammar_->publish(action.text);
        break;
      case TransitionAction::Kind::kDisplay:
        display_->publish(action.text);
        break;
      case TransitionAction::Kind::kStartTimer:
        timers_.push_back({Clock::now() + scaled(action.seconds), Timer::Kind::kResponse, state_.epoch});
        break;
      case TransitionAction::Kind::kReport:
        std::fprintf(stderr, "[dialogue] %s\n", action.text.c_str());
        break;
      case TransitionAction::Kind::kSay:
      case TransitionAction::Kind::kAbort:
        break;
    }
  }
  std::string turn = robot_turn_text(transition.actions);
  if (!turn.empty()) {
    if (!robot_speaking_) speech_status_->publish("start");
    robot_speaking_ = true;
    say_->publish(turn);
    timers_.erase(std::remove_if(timers_.begin(), timers_.end(),
                                 [](const Timer& t) { return t.kind == Timer::Kind::kSpeechEnd; }),
                  timers_.end());
    timers_.push_back({Clock::now() + scaled(speech_duration(turn) + options_.eos_delay),
                       Timer::Kind::kSpeechEnd, state_.epoch});
  }
}

void DialogueNode::run() {
  std::unique_lock lock(mutex_);
  apply(machine_.start(session_time()));
  while (!stop_) {
    bool terminal = state_.id == StateId::kFarewell || state_.id == StateId::kAborted;
    if (terminal && !robot_speaking_) break;

    auto next_due = Clock::now() + std::chrono::milliseconds(50);
    for (const auto& t : timers_) next_due = std::min(next_due, t.due);
    wake_.wait_until(lock, next_due, [this] { return stop_ || !events_.empty(); });

    std::vector<DialogueEvent> ready;
    auto now = Clock::now();
    for (auto it = timers_.begin(); it != timers_.end();) {
      if (it->due > now) {
        ++it;
        continue;
      }
      if (it->kind == Timer::Kind::kSpeechEnd) {
        robot_speaking_ = false;
        speech_status_->publish("end");
        ready.push_back(DialogueEvent::robot_speech_ended());
      } else if (it->epoch == state_.epoch && expects_speech(state_.id)) {
        ready.push_back(DialogueEvent::timeout());
      }
      it = timers_.erase(it);
    }
    while (!events_.empty()) {
      ready.push_back(std::move(events_.front()));
      events_.pop_front();
    }
    for (const auto& event : ready) {
      try {
        apply(machine_.advance(state_, event, session_time()));
      } catch (const Error& e) {
        std::fprintf(stderr, "[dialogue] ignored: %s\n", e.what());
      }
    }
  }
}

std::vector<StateId> DialogueNode::trace() const {
  std::lock_guard lock(mutex_);
  return trace_;
}

DialogueState DialogueNode::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

}  // namespace robospeech::dialogue
