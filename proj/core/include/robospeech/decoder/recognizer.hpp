#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "robospeech/decoder/audio_ring.hpp"
#include "robospeech/decoder/search.hpp"
#include "robospeech/decoder/session_record.hpp"
#include "robospeech/grammar/fst.hpp"
#include "robospeech/segment.hpp"

namespace robospeech::decoder {

enum class SourceKind { kLive, kFile };

struct RecognizerConfig {
  double readback = 0.5;          // seconds rewound at gate-open
  double frame_rate = 100.0;      // frames per second
  int endpoint_frames = 30;       // K: stability needed for an early endpoint
  double utterance_timeout = 10.0;
  std::size_t beam = 64;          // live search states per frame, 0 = unlimited
  std::size_t ring_capacity = 6000;
  SourceKind source = SourceKind::kLive;
  std::string record_path;        // empty = no session record

  // Throws Error(kInvalidArgument) on out-of-range values.
  void validate() const;
};

enum class EndpointKind { kEarly, kTimeout };

std::string_view to_string(EndpointKind kind);

struct DecodeResult {
  UtteranceSegment segment;
  std::vector<WordAlignment> words;
  double score = kInfCost;  // negative log probability; inf for a "!SIL" fallback
  EndpointKind endpoint = EndpointKind::kEarly;
  std::string grammar_id;
  std::int64_t window_start_frame = 0;
  double emitted_at = 0.0;  // session time the result became available

  bool operator==(const DecodeResult&) const = default;
};

// Everything the recognizer reports, in order: results, aborted
// utterances, grammar acknowledgements and gate changes.
struct RecognizerEvent {
  enum class Kind { kResult, kAborted, kGrammar, kGate };

  Kind kind = Kind::kResult;
  double time = 0.0;
  std::optional<DecodeResult> result;  // kResult
  std::string text;                    // partial (kAborted) or grammar id (kGrammar)
  bool robot_speaking = false;         // kGate
};

// Online grammar-constrained recognizer. Frames are buffered in a ring; an
// utterance is decoded while the gate is open and a grammar is active, and
// ends with an early endpoint or a timeout. Calls are serialized by an
// internal mutex, so one feeding thread and one decoding thread may share an
// instance.
class Recognizer {
 public:
  using EventSink = std::function<void(const RecognizerEvent&)>;

  explicit Recognizer(RecognizerConfig config = {});

  const RecognizerConfig& config() const { return config_; }

  void feed(const ObservationFrame& frame);
  void feed(const std::vector<ObservationFrame>& frames);

  // nullptr selects no grammar (recognition off). Switching while an
  // utterance is being decoded aborts it; setting the active grammar again
  // leaves the current utterance untouched.
  void set_grammar(std::shared_ptr<const grammar::GrammarFst> fst);
  void set_gate(bool robot_speaking, double at);

  // Decodes all pending frames; returns the best partial word sequence, or
  // nullopt if nothing was decoded.
  std::optional<std::string> step();
  std::optional<DecodeResult> poll_result(double now);

  // feed + step + poll at the end time of `frame`: the per-frame cycle used
  // identically by live and file sources.
  std::optional<DecodeResult> pump(const ObservationFrame& frame);

  void add_sink(EventSink sink);

  // Session time of the ring cursor (end of the newest frame).
  double now() const;
  bool gated() const;
  bool listening() const;
  std::string active_grammar() const;
  std::int64_t cursor() const;
  // Every frame index that has been consumed by a search, in order.
  std::vector<std::int64_t> decoded_frames() const;

 private:
  void start_utterance(std::int64_t window_start, double listen_start);
  void abort_utterance(double at);
  void emit(const RecognizerEvent& event);
  void record(const RecordEntry& entry);
  std::optional<std::string> step_locked();
  std::optional<DecodeResult> poll_locked(double now);
  DecodeResult make_result(const Hypothesis& h, EndpointKind kind, double end, double emitted) const;
  double frame_time(std::int64_t index) const { return static_cast<double>(index) / config_.frame_rate; }

  RecognizerConfig config_;
  mutable std::mutex mutex_;
  AudioRing ring_;
  std::unique_ptr<SessionRecorder> recorder_;
  std::vector<EventSink> sinks_;

  std::shared_ptr<const grammar::GrammarFst> grammar_;
  bool gated_ = false;
  bool listening_ = false;
  std::unique_ptr<ViterbiSearch> search_;
  std::int64_t window_start_ = 0;
  std::int64_t next_frame_ = 0;
  double listen_start_ = 0.0;
  std::string stable_text_;
  std::int64_t stable_since_ = -1;
  std::optional<DecodeResult> pending_;
  std::vector<std::int64_t> decoded_;
};

// Grammar lookup used when replaying GrammarEvents.
using GrammarResolver = std::function<std::shared_ptr<const grammar::GrammarFst>(const std::string&)>;

// Applies one record entry to the recognizer (frames via pump). Gate events
// with a NaN time are stamped with the recognizer's current time.
std::optional<DecodeResult> apply_entry(Recognizer& recognizer, const RecordEntry& entry,
                                        const GrammarResolver& resolve);

}  // namespace robospeech::decoder
