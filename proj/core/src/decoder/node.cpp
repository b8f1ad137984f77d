#include "robospeech/decoder/node.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "robospeech/error.hpp"
#include "robospeech/topics.hpp"

namespace robospeech::decoder {

std::optional<RecordEntry> FileSource::next(double) {
  if (exhausted()) return std::nullopt;
  return entries_[position_++];
}

LiveSource::LiveSource(const portnet::Endpoint& broker) {
  for (const char* topic : {topics::kAudioFrames, topics::kRobotSpeech, topics::kGrammar}) {
    ports_.push_back(portnet::subscribe(broker, topic));
  }
  for (auto& port : ports_) readers_.emplace_back([this, &port] { pump(port); });
}

LiveSource::~LiveSource() { stop(); }

void LiveSource::stop() {
  stop_ = true;
  for (auto& reader : readers_) {
    if (reader.joinable()) reader.join();
  }
  for (auto& port : ports_) port.close();
}

void LiveSource::pump(portnet::Port& port) {
  const std::string& topic = port.name().str();
  while (!stop_) {
    std::optional<portnet::PortMessage> message;
    try {
      message = port.next_message(0.05);
    } catch (const Error&) {
      return;
    }
    if (!message) continue;
    std::optional<RecordEntry> entry;
    try {
      if (topic == topics::kAudioFrames) {
        entry = frame_from_json(message->payload);
      } else if (topic == topics::kRobotSpeech) {
        if (message->payload == "start" || message->payload == "end") {
          entry = GateEvent{message->payload == "start", std::numeric_limits<double>::quiet_NaN()};
        }
      } else {
        entry = GrammarEvent{message->payload};
      }
    } catch (const Error&) {
      continue;  // malformed frame payloads are dropped
    }
    if (!entry) continue;
    {
      std::lock_guard lock(mutex_);
      queue_.push_back(std::move(*entry));
    }
    ready_.notify_one();
  }
}

std::optional<RecordEntry> LiveSource::next(double timeout_seconds) {
  std::unique_lock lock(mutex_);
  ready_.wait_for(lock, std::chrono::duration<double>(timeout_seconds),
                  [this] { return !queue_.empty(); });
  if (queue_.empty()) return std::nullopt;
  RecordEntry entry = std::move(queue_.front());
  queue_.pop_front();
  return entry;
}

std::unique_ptr<FrameSource> select_source(SourceKind kind, const std::string& path,
                                           const portnet::Endpoint& broker) {
  if (kind == SourceKind::kFile) return std::make_unique<FileSource>(path);
  return std::make_unique<LiveSource>(broker);
}

std::vector<DecodeResult> run_source(FrameSource& source, Recognizer& recognizer,
                                     const GrammarResolver& resolve,
                                     const std::atomic<bool>* stop) {
  std::vector<DecodeResult> results;
  while (!source.exhausted() && !(stop && *stop)) {
    auto entry = source.next(0.1);
    if (!entry) continue;
    try {
      if (auto result = apply_entry(recognizer, *entry, resolve)) results.push_back(std::move(*result));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kGateSequence && e.code() != ErrorCode::kOutOfOrderFrame) throw;
      std::fprintf(stderr, "[recognizer] skipped: %s\n", e.what());
    }
  }
  return results;
}

Recognizer::EventSink sentence_publisher(std::shared_ptr<portnet::Port> port) {
  return [port = std::move(port)](const RecognizerEvent& event) {
    if (event.kind != RecognizerEvent::Kind::kResult) return;
    try {
      port->publish_at(event.result->segment.text, event.time);
    } catch (const Error& e) {
      // A late stamp (clock skew against an earlier manual publish) falls back
      // to the port clock.
      if (e.code() != ErrorCode::kNonMonotonicTimestamp) throw;
      port->publish(event.result->segment.text);
    }
  };
}

}  // namespace robospeech::decoder
