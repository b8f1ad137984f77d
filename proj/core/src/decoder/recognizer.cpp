#include "robospeech/decoder/recognizer.hpp"

#include <cmath>

#include "robospeech/error.hpp"
#include "robospeech/grammar/library.hpp"

namespace robospeech::decoder {
namespace {
constexpr double kTimeSlack = 1e-9;
}

void RecognizerConfig::validate() const {
  if (!(readback >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "readback must be >= 0");
  if (!(frame_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "frame rate must be > 0");
  if (endpoint_frames < 1) throw Error(ErrorCode::kInvalidArgument, "endpoint K must be >= 1");
  if (!(utterance_timeout > 0.0)) throw Error(ErrorCode::kInvalidArgument, "timeout must be > 0");
  if (ring_capacity == 0) throw Error(ErrorCode::kInvalidArgument, "ring capacity must be > 0");
}

std::string_view to_string(EndpointKind kind) {
  return kind == EndpointKind::kEarly ? "early" : "timeout";
}

Recognizer::Recognizer(RecognizerConfig config)
    : config_(std::move(config)), ring_(config_.ring_capacity) {
  config_.validate();
  if (!config_.record_path.empty()) {
    recorder_ = std::make_unique<SessionRecorder>(config_.record_path);
  }
}

void Recognizer::add_sink(EventSink sink) {
  std::lock_guard lock(mutex_);
  sinks_.push_back(std::move(sink));
}

void Recognizer::emit(const RecognizerEvent& event) {
  for (const auto& sink : sinks_) sink(event);
}

void Recognizer::record(const RecordEntry& entry) {
  if (recorder_) recorder_->write(entry);
}

void Recognizer::feed(const ObservationFrame& frame) {
  std::lock_guard lock(mutex_);
  ring_.push(frame);
  record(frame);
}

void Recognizer::feed(const std::vector<ObservationFrame>& frames) {
  for (const auto& frame : frames) feed(frame);
}

void Recognizer::start_utterance(std::int64_t window_start, double listen_start) {
  listening_ = true;
  search_ = std::make_unique<ViterbiSearch>(grammar_, config_.beam);
  window_start_ = std::max(window_start, ring_.floor());
  next_frame_ = window_start_;
  listen_start_ = listen_start;
  stable_text_.clear();
  stable_since_ = -1;
}

void Recognizer::abort_utterance(double at) {
  if (!listening_) return;
  std::string partial = search_ && search_->frames_decoded() ? search_->best().text() : "";
  listening_ = false;
  search_.reset();
  // Silence-only hypotheses are not utterances; nothing to report.
  if (!partial.empty() && partial != kSilenceWord) {
    RecognizerEvent event;
    event.kind = RecognizerEvent::Kind::kAborted;
    event.time = at;
    event.text = partial;
    emit(event);
  }
}

void Recognizer::set_grammar(std::shared_ptr<const grammar::GrammarFst> fst) {
  std::lock_guard lock(mutex_);
  std::string id = fst ? fst->grammar_id() : std::string(grammar::kNoGrammar);
  record(GrammarEvent{id});
  double at = frame_time(ring_.cursor());
  RecognizerEvent ack;
  ack.kind = RecognizerEvent::Kind::kGrammar;
  ack.time = at;
  ack.text = id;
  emit(ack);

  bool same = fst && grammar_ && (fst == grammar_ || *fst == *grammar_);
  if (same && listening_) return;
  abort_utterance(at);
  grammar_ = std::move(fst);
  if (grammar_ && !gated_) start_utterance(ring_.cursor(), at);
}

void Recognizer::set_gate(bool robot_speaking, double at) {
  std::lock_guard lock(mutex_);
  if (robot_speaking == gated_) {
    throw Error(ErrorCode::kGateSequence,
                robot_speaking ? "robot speech start while already speaking"
                               : "robot speech end without a start");
  }
  record(GateEvent{robot_speaking, at});
  RecognizerEvent event;
  event.kind = RecognizerEvent::Kind::kGate;
  event.time = at;
  event.robot_speaking = robot_speaking;
  emit(event);

  gated_ = robot_speaking;
  if (gated_) {
    abort_utterance(at);
    return;
  }
  if (!grammar_) return;
  auto window = static_cast<std::int64_t>(
      std::floor((at - config_.readback) * config_.frame_rate + kTimeSlack));
  start_utterance(std::max<std::int64_t>(window, 0), at);
}

std::optional<std::string> Recognizer::step() {
  std::lock_guard lock(mutex_);
  return step_locked();
}

std::optional<std::string> Recognizer::step_locked() {
  if (gated_ || !listening_ || pending_) return std::nullopt;
  bool consumed = false;
  next_frame_ = std::max(next_frame_, ring_.floor());
  while (next_frame_ < ring_.cursor()) {
    std::int64_t index = next_frame_++;
    search_->advance(ring_.at(index));
    decoded_.push_back(index);
    consumed = true;

    Hypothesis best = search_->best();
    std::string text = best.text();
    if (best.in_trailing_silence && !text.empty() && text != kSilenceWord) {
      if (stable_since_ < 0 || text != stable_text_) {
        stable_text_ = text;
        stable_since_ = index;
      } else if (index - stable_since_ == config_.endpoint_frames) {
        double end = frame_time(best.words.back().end_frame);
        pending_ = make_result(best, EndpointKind::kEarly, end, frame_time(index + 1));
        listening_ = false;
        return text;
      }
    } else {
      stable_since_ = -1;
      stable_text_.clear();
    }
  }
  if (!consumed) return std::nullopt;
  return search_->best().text();
}

DecodeResult Recognizer::make_result(const Hypothesis& h, EndpointKind kind, double end,
                                     double emitted) const {
  DecodeResult result;
  result.segment.start = frame_time(window_start_);
  result.segment.end = std::max(end, result.segment.start);
  result.segment.text = h.text();
  result.segment.source = SegmentSource::kAuto;
  result.words = h.words;
  result.score = h.cost;
  result.endpoint = kind;
  result.grammar_id = grammar_ ? grammar_->grammar_id() : "";
  result.window_start_frame = window_start_;
  result.emitted_at = emitted;
  return result;
}

std::optional<DecodeResult> Recognizer::poll_result(double now) {
  std::lock_guard lock(mutex_);
  return poll_locked(now);
}

std::optional<DecodeResult> Recognizer::poll_locked(double now) {
  std::optional<DecodeResult> result;
  if (pending_) {
    result = std::move(pending_);
    pending_.reset();
  } else if (listening_ && !gated_ && now - listen_start_ >= config_.utterance_timeout - kTimeSlack) {
    std::optional<Hypothesis> best;
    if (search_->frames_decoded()) best = search_->best_complete();
    if (!best) {
      Hypothesis silence;
      silence.words.push_back({kSilenceWord, window_start_, window_start_});
      best = silence;
    }
    result = make_result(*best, EndpointKind::kTimeout, now, now);
    listening_ = false;
    search_.reset();
  }
  if (result) {
    RecognizerEvent event;
    event.kind = RecognizerEvent::Kind::kResult;
    event.time = result->emitted_at;
    event.result = result;
    emit(event);
  }
  return result;
}

std::optional<DecodeResult> Recognizer::pump(const ObservationFrame& frame) {
  std::lock_guard lock(mutex_);
  ring_.push(frame);
  record(frame);
  step_locked();
  return poll_locked(frame_time(frame.index + 1));
}

double Recognizer::now() const {
  std::lock_guard lock(mutex_);
  return frame_time(ring_.cursor());
}

bool Recognizer::gated() const {
  std::lock_guard lock(mutex_);
  return gated_;
}

bool Recognizer::listening() const {
  std::lock_guard lock(mutex_);
  return listening_;
}

std::string Recognizer::active_grammar() const {
  std::lock_guard lock(mutex_);
  return grammar_ ? grammar_->grammar_id() : std::string(grammar::kNoGrammar);
}

std::int64_t Recognizer::cursor() const {
  std::lock_guard lock(mutex_);
  return ring_.cursor();
}

std::vector<std::int64_t> Recognizer::decoded_frames() const {
  std::lock_guard lock(mutex_);
  return decoded_;
}

std::optional<DecodeResult> apply_entry(Recognizer& recognizer, const RecordEntry& entry,
                                        const GrammarResolver& resolve) {
  if (const auto* frame = std::get_if<ObservationFrame>(&entry)) return recognizer.pump(*frame);
  if (const auto* gate = std::get_if<GateEvent>(&entry)) {
    double at = std::isnan(gate->at) ? recognizer.now() : gate->at;
    recognizer.set_gate(gate->robot_speaking, at);
  } else if (const auto* g = std::get_if<GrammarEvent>(&entry)) {
    recognizer.set_grammar(g->id == grammar::kNoGrammar ? nullptr : resolve(g->id));
  }
  return std::nullopt;
}

}  // namespace robospeech::decoder
