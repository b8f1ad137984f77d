#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "robospeech/decoder/recognizer.hpp"
#include "robospeech/decoder/session_record.hpp"
#include "robospeech/portnet/client.hpp"

namespace robospeech::decoder {

// Where frames and control events come from.
class FrameSource {
 public:
  virtual ~FrameSource() = default;
  // Next entry, or nullopt on timeout / end of input.
  virtual std::optional<RecordEntry> next(double timeout_seconds) = 0;
  virtual bool exhausted() const = 0;
};

// Replays a session record exactly as it was recorded.
class FileSource : public FrameSource {
 public:
  explicit FileSource(const std::string& path) : entries_(read_session_record(path)) {}
  explicit FileSource(std::vector<RecordEntry> entries) : entries_(std::move(entries)) {}

  std::optional<RecordEntry> next(double) override;
  bool exhausted() const override { return position_ >= entries_.size(); }

 private:
  std::vector<RecordEntry> entries_;
  std::size_t position_ = 0;
};

// Frames from /Audio/Frames, gate events from /Robot/SpeechStatus and
// grammar switches from /Dialogue/Grammar, merged in arrival order. Gate
// events carry a NaN time: they take effect at the recognizer's clock.
class LiveSource : public FrameSource {
 public:
  explicit LiveSource(const portnet::Endpoint& broker);
  ~LiveSource() override;

  std::optional<RecordEntry> next(double timeout_seconds) override;
  bool exhausted() const override { return false; }
  void stop();

 private:
  void pump(portnet::Port& port);

  std::vector<portnet::Port> ports_;
  std::vector<std::thread> readers_;
  std::atomic<bool> stop_{false};
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<RecordEntry> queue_;
};

// Throws Error(kMissingFile) / ParseError(kMalformedRecord) for bad files.
std::unique_ptr<FrameSource> select_source(SourceKind kind, const std::string& path,
                                           const portnet::Endpoint& broker = {});

// Feeds every entry of `source` to the recognizer until the source is
// exhausted or `stop` becomes true; returns the results in order. Gate and
// frame-order violations are reported on stderr and skipped.
std::vector<DecodeResult> run_source(FrameSource& source, Recognizer& recognizer,
                                     const GrammarResolver& resolve,
                                     const std::atomic<bool>* stop = nullptr);

// Publishes recognized text on /SpeechRecognition/Sentence, stamped with the
// time the result became available.
Recognizer::EventSink sentence_publisher(std::shared_ptr<portnet::Port> port);

}  // namespace robospeech::decoder
