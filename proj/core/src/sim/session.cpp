#include "robospeech/sim/session.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <random>

#include <nlohmann/json.hpp>

#include "robospeech/dialogue/energy.hpp"
#include "robospeech/dialogue/node.hpp"
#include "robospeech/error.hpp"
#include "robospeech/sim/corrupt.hpp"

namespace robospeech::sim {

using decoder::ObservationFrame;
using dialogue::DialogueEvent;
using dialogue::StateId;
using dialogue::TransitionAction;

void EosDelay::validate() const {
  if (!(a >= 0.0) || !(b >= a) || !std::isfinite(b)) {
    throw Error(ErrorCode::kInvalidArgument, "eos delay needs 0 <= a <= b");
  }
}

std::string EosDelay::describe() const {
  char buf[64];
  if (kind == Kind::kFixed) {
    std::snprintf(buf, sizeof buf, "fixed:%g", a);
  } else {
    std::snprintf(buf, sizeof buf, "uniform:%g,%g", a, b);
  }
  return buf;
}

EosDelay EosDelay::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "fixed" && !args.empty()) {
      std::size_t used = 0;
      double d = std::stod(args, &used);
      if (used == args.size()) {
        EosDelay delay = fixed(d);
        delay.validate();
        return delay;
      }
    } else if (kind == "uniform") {
      auto comma = args.find(',');
      if (comma != std::string::npos) {
        EosDelay delay = uniform(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
        delay.validate();
        return delay;
      }
    }
  } catch (const std::logic_error&) {
  }
  throw Error(ErrorCode::kInvalidArgument, "bad eos delay '" + text + "' (fixed:D or uniform:A,B)");
}

double eos_delay_sample(const EosDelay& delay, std::uint64_t seed, std::uint64_t k) {
  delay.validate();
  if (delay.kind == EosDelay::Kind::kFixed) return delay.a;
  std::mt19937_64 rng(mix_seed(seed, k));
  double u = std::generate_canonical<double, 53>(rng);
  return std::clamp(delay.a + (delay.b - delay.a) * u, delay.a, delay.b);
}

void SessionConfig::validate() const {
  auto probability = [](double p, const char* what, bool closed) {
    if (!(p >= 0.0) || (closed ? p > 1.0 : p >= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, std::string(what) + " out of range");
    }
  };
  probability(confusion, "confusion probability", false);
  probability(disfluency, "disfluency probability", true);
  probability(no_answer, "no-answer probability", true);
  eos_delay.validate();
  if (frames_per_word <= 0) throw Error(ErrorCode::kInvalidArgument, "frames per word must be positive");
  if (!(response_gap >= 0.0) || !(reaction >= 0.0) || !(linger >= 0.0) || !(max_duration > 0.0) ||
      !(arm_mass > 0.0) || !(tolerance >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "session timings must be non-negative");
  }
  recognizer.validate();
}

std::vector<eval::GoldEntry> GoldAnnotation::entries() const {
  std::vector<eval::GoldEntry> out = robot;
  for (const auto& s : segments) out.push_back({s.segment, kChildSpeaker});
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.segment.start < y.segment.start;
  });
  return out;
}

void check_library(const dialogue::DialogueScript& script, const grammar::GrammarLibrary& library) {
  for (StateId id : dialogue::all_states()) {
    if (!dialogue::expects_speech(id)) continue;
    const auto& g = script.state(id).grammar;
    if (!library.contains(g)) {
      throw Error(ErrorCode::kNoGrammar, "state " + std::string(dialogue::state_name(id)) +
                                             " needs grammar '" + g + "'");
    }
  }
}

namespace {

struct Pending {
  enum class Kind { kRobotStart, kRobotEnd, kEosMessage, kChildStart, kResponseTimer, kEnergyDone };
  explicit Pending(Kind k) : kind(k) {}

  Kind kind;
  std::uint64_t epoch = 0;    // timers and child turns
  std::string text;           // robot turn
  std::int64_t window = 0;    // child turn: window frame the recognizer will open
};

class SessionDriver {
 public:
  SessionDriver(const SessionConfig& config, const dialogue::DialogueMachine& machine,
                const grammar::GrammarLibrary& library)
      : config_(config),
        machine_(machine),
        library_(library),
        recognizer_(config.recognizer),
        fps_(config.recognizer.frame_rate),
        choice_rng_(mix_seed(config.seed, 1)),
        disfluency_rng_(mix_seed(config.seed, 2)),
        speed_rng_(mix_seed(config.seed, 4)),
        silence_rng_(mix_seed(config.seed, 5)) {
    recognizer_.add_sink([this](const decoder::RecognizerEvent& e) { run_.events.push_back(e); });
  }

  SessionRun run() {
    const std::int64_t cap = ticks(config_.max_duration);
    auto start = machine_.start(0.0);
    state_ = start.state;
    run_.trace.push_back(state_.id);
    note_state(0);
    apply(start.actions, 0);

    std::int64_t tick = 0;
    std::optional<std::int64_t> stop_at;
    for (; tick < cap; ++tick) {
      while (!queue_.empty() && queue_.begin()->first <= tick) {
        Pending p = std::move(queue_.begin()->second);
        queue_.erase(queue_.begin());
        handle(p, tick);
      }
      if (!stop_at && terminal() && !robot_busy()) stop_at = tick + ticks(config_.linger);
      if (stop_at && tick >= *stop_at) break;
      pump(tick);
    }
    run_.final_state = state_;
    run_.duration = static_cast<double>(tick) / fps_;
    return std::move(run_);
  }

 private:
  std::int64_t ticks(double seconds) const { return std::llround(seconds * fps_); }
  double at(std::int64_t tick) const { return static_cast<double>(tick) / fps_; }
  bool terminal() const { return state_.id == StateId::kFarewell || state_.id == StateId::kAborted; }
  bool robot_busy() const { return turn_queued_ || robot_speaking_ || eos_pending_; }

  void schedule(std::int64_t tick, Pending p) { queue_.emplace(tick, std::move(p)); }

  void extra(const std::string& kind, nlohmann::json body) {
    body["ev"] = kind;
    run_.timeline.push_back(decoder::ExtraEvent{kind, body.dump()});
  }

  void note_state(std::int64_t tick) {
    extra("state", {{"name", std::string(state_.name())}, {"t", at(tick)}});
  }

  void pump(std::int64_t tick) {
    ObservationFrame frame = decoder::silence_frame(tick);
    if (!child_frames_.empty() && child_frames_.front().index == tick) {
      frame = std::move(child_frames_.front());
      child_frames_.pop_front();
    }
    run_.timeline.push_back(frame);
    auto result = recognizer_.pump(frame);
    if (!result) return;
    run_.results.push_back(*result);
    dispatch(DialogueEvent::recognized(result->segment.text), tick + 1);
  }

  void dispatch(const DialogueEvent& event, std::int64_t tick) {
    dialogue::Transition t;
    try {
      t = machine_.advance(state_, event, at(tick));
    } catch (const Error& e) {
      run_.illegal_events.push_back(e.what());
      return;
    }
    bool entered = t.state.id != state_.id;
    state_ = t.state;
    if (entered) {
      run_.trace.push_back(state_.id);
      note_state(tick);
      if (state_.id == StateId::kSession1) {
        Pending p(Pending::Kind::kEnergyDone);
        p.epoch = state_.epoch;
        schedule(tick + ticks(machine_.script().state(state_.id).seconds), p);
      }
    }
    apply(t.actions, tick);
  }

  void apply(const std::vector<TransitionAction>& actions, std::int64_t tick) {
    run_.actions.push_back(actions);
    for (const auto& a : actions) {
      switch (a.kind) {
        case TransitionAction::Kind::kSetGrammar:
          run_.timeline.push_back(decoder::GrammarEvent{a.text});
          recognizer_.set_grammar(a.text == grammar::kNoGrammar ? nullptr : library_.get(a.text));
          break;
        case TransitionAction::Kind::kStartTimer: {
          Pending p(Pending::Kind::kResponseTimer);
          p.epoch = state_.epoch;
          schedule(tick + ticks(a.seconds), p);
          break;
        }
        default:
          break;
      }
    }
    std::string turn = dialogue::robot_turn_text(actions);
    if (!turn.empty()) {
      Pending p(Pending::Kind::kRobotStart);
      p.text = turn;
      std::int64_t when = std::max(tick + ticks(config_.reaction), robot_free_at_);
      turn_queued_ = true;
      schedule(when, p);
    }
  }

  void handle(const Pending& p, std::int64_t tick) {
    switch (p.kind) {
      case Pending::Kind::kRobotStart: {
        turn_queued_ = false;
        robot_speaking_ = true;
        run_.timeline.push_back(decoder::GateEvent{true, at(tick)});
        recognizer_.set_gate(true, at(tick));
        extra("say", {{"text", p.text}, {"t", at(tick)}});
        std::int64_t end = tick + std::max<std::int64_t>(ticks(dialogue::speech_duration(p.text)), 1);
        run_.gold.robot.push_back({{at(tick), at(end), p.text, SegmentSource::kGold}, eval::kRobotSpeaker});
        Pending done(Pending::Kind::kRobotEnd);
        schedule(end, done);
        robot_free_at_ = end;
        break;
      }
      case Pending::Kind::kRobotEnd: {
        robot_speaking_ = false;
        eos_pending_ = true;
        double delay = eos_delay_sample(config_.eos_delay, mix_seed(config_.seed, 3), turn_count_++);
        std::int64_t message = tick + ticks(delay);
        schedule(message, Pending(Pending::Kind::kEosMessage));
        robot_free_at_ = message + 1;
        if (dialogue::expects_speech(state_.id)) {
          Pending child(Pending::Kind::kChildStart);
          child.epoch = state_.epoch;
          child.window = std::max<std::int64_t>(message - ticks(config_.recognizer.readback), 0);
          schedule(tick + ticks(config_.response_gap), child);
        } else if (dialogue::is_session(state_.id) && state_.id != StateId::kSession1) {
          Pending energy(Pending::Kind::kEnergyDone);
          energy.epoch = state_.epoch;
          schedule(tick + ticks(machine_.script().state(state_.id).seconds), energy);
        }
        break;
      }
      case Pending::Kind::kEosMessage:
        eos_pending_ = false;
        run_.timeline.push_back(decoder::GateEvent{false, at(tick)});
        recognizer_.set_gate(false, at(tick));
        dispatch(DialogueEvent::robot_speech_ended(), tick);
        break;
      case Pending::Kind::kChildStart:
        if (p.epoch == state_.epoch && dialogue::expects_speech(state_.id)) speak(tick, p.window);
        break;
      case Pending::Kind::kResponseTimer:
        if (p.epoch == state_.epoch && dialogue::expects_speech(state_.id)) {
          dispatch(DialogueEvent::timeout(), tick);
        }
        break;
      case Pending::Kind::kEnergyDone:
        if (p.epoch == state_.epoch && dialogue::is_session(state_.id)) {
          double joules = exercise_energy(machine_.script().state(state_.id).seconds);
          extra("energy", {{"session", dialogue::ordinal(state_.id)}, {"joules", joules}, {"t", at(tick)}});
          dispatch(DialogueEvent::energy_session_done(joules), tick);
        }
        break;
    }
  }

  // Arm speeds sampled at 30 Hz around a per-session level.
  double exercise_energy(double seconds) {
    static constexpr double kLevels[] = {0.05, 0.6, 1.4, 1.6};
    double level = kLevels[dialogue::ordinal(state_.id) - 1];
    std::normal_distribution<double> jitter(0.0, 0.1 * level + 0.01);
    std::vector<dialogue::SpeedSample> samples;
    const double dt = 1.0 / 30.0;
    for (double t = 0.0; t < seconds; t += dt) samples.push_back({std::abs(level + jitter(speed_rng_)), dt});
    return dialogue::compute_energy(samples, config_.arm_mass);
  }

  void speak(std::int64_t tick, std::int64_t window) {
    const auto& script = machine_.script().state(state_.id);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool silent = unit(silence_rng_) < config_.no_answer;
    std::size_t pick = std::uniform_int_distribution<std::size_t>(0, script.choices.size() - 1)(choice_rng_);
    double u = unit(disfluency_rng_);
    bool repeat = unit(disfluency_rng_) < 0.5;
    if (silent) return;

    const std::string& phrase = script.choices[pick];
    std::vector<std::string> words = eval::split_words(phrase);
    const std::int64_t fpw = config_.frames_per_word;
    std::vector<std::pair<std::string, std::int64_t>> spoken;  // word, frames
    std::string text = phrase;
    bool disfluent = u < config_.disfluency;
    if (disfluent && repeat) {
      spoken.emplace_back(words.front(), fpw / 2);
      text = words.front() + "- " + phrase;
      for (const auto& w : words) spoken.emplace_back(w, fpw);
    } else if (disfluent) {
      text.clear();
      for (std::size_t i = 0; i < words.size(); ++i) {
        bool last = i + 1 == words.size();
        spoken.emplace_back(words[i], last ? std::max<std::int64_t>(fpw / 2, 1) : fpw);
        text += (i ? " " : "") + words[i] + (last ? "-" : "");
      }
    } else {
      for (const auto& w : words) spoken.emplace_back(w, fpw);
    }

    std::vector<ObservationFrame> frames;
    std::int64_t index = tick;
    for (const auto& [w, n] : spoken) {
      for (std::int64_t f = 0; f < n; ++f) frames.push_back(decoder::word_frame(index++, w));
    }
    if (config_.confusion > 0.0) {
      auto grammar = library_.get(script.grammar);
      frames = corrupt_observations(frames, config_.confusion, mix_seed(config_.seed, 1000 + utterances_),
                                    confusable_sets(*grammar));
    }
    ++utterances_;
    child_frames_.insert(child_frames_.end(), frames.begin(), frames.end());

    GoldSegment g;
    g.segment = {at(tick), at(index), text, SegmentSource::kGold};
    g.state = state_.id;
    g.fluency = disfluent ? eval::Fluency::kDisfluent : eval::Fluency::kFluent;
    g.expected = !disfluent;
    g.intended = phrase;
    const std::int64_t slack = ticks(config_.tolerance);
    g.oracle.late_start = window - tick > slack;
    g.oracle.early_start = tick - window > slack;
    run_.gold.segments.push_back(std::move(g));
  }

  const SessionConfig& config_;
  const dialogue::DialogueMachine& machine_;
  const grammar::GrammarLibrary& library_;
  decoder::Recognizer recognizer_;
  double fps_;

  std::mt19937_64 choice_rng_, disfluency_rng_, speed_rng_, silence_rng_;
  std::multimap<std::int64_t, Pending> queue_;
  std::deque<ObservationFrame> child_frames_;
  dialogue::DialogueState state_;
  SessionRun run_;

  bool robot_speaking_ = false;
  bool eos_pending_ = false;
  bool turn_queued_ = false;
  std::int64_t robot_free_at_ = 0;
  std::uint64_t turn_count_ = 0;
  std::uint64_t utterances_ = 0;
};

}  // namespace

SessionRun generate_session(const SessionConfig& config, const dialogue::DialogueMachine& machine,
                            const grammar::GrammarLibrary& library) {
  config.validate();
  check_library(machine.script(), library);
  SessionDriver driver(config, machine, library);
  return driver.run();
}

}  // namespace robospeech::sim
