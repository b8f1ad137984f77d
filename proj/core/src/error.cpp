#include "robospeech/error.hpp"

namespace robospeech {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidName: return "invalid-name";
    case ErrorCode::kNameCollision: return "name-collision";
    case ErrorCode::kBrokerUnreachable: return "broker-unreachable";
    case ErrorCode::kClosedHandle: return "closed-handle";
    case ErrorCode::kNonMonotonicTimestamp: return "non-monotonic-timestamp";
    case ErrorCode::kSyntaxError: return "syntax-error";
    case ErrorCode::kUnresolvedRule: return "unresolved-rule";
    case ErrorCode::kRecursiveRule: return "recursive-rule";
    case ErrorCode::kLimitExceeded: return "limit-exceeded";
    case ErrorCode::kOutOfOrderFrame: return "out-of-order-frame";
    case ErrorCode::kEvictedFrame: return "evicted-frame";
    case ErrorCode::kGateSequence: return "gate-sequence";
    case ErrorCode::kMissingFile: return "missing-file";
    case ErrorCode::kMalformedRecord: return "malformed-record";
    case ErrorCode::kNoGrammar: return "no-grammar";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kZeroNoise: return "zero-noise";
    case ErrorCode::kRateMismatch: return "rate-mismatch";
    case ErrorCode::kNoiseTooShort: return "noise-too-short";
    case ErrorCode::kUnreadableFile: return "unreadable-file";
    case ErrorCode::kIllegalEvent: return "illegal-event-for-state";
    case ErrorCode::kNoSpeechExpected: return "state-expects-no-speech";
    case ErrorCode::kNegativeInput: return "negative-input";
    case ErrorCode::kMarkerSyntax: return "marker-syntax-error";
    case ErrorCode::kNoOverlap: return "no-overlap";
    case ErrorCode::kZeroTotal: return "zero-total";
    case ErrorCode::kEmptyReference: return "empty-reference";
    case ErrorCode::kLogParse: return "log-parse-error";
    case ErrorCode::kUnbridgedTopic: return "unbridged-topic";
    case ErrorCode::kMalformedJson: return "malformed-json";
    case ErrorCode::kUnknownType: return "unknown-type";
    case ErrorCode::kNotInGrammar: return "utterance-not-in-grammar";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

Error::Error(ErrorCode code, const std::string& full, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + full), code_(code), detail_(detail) {}

ParseError::ParseError(ErrorCode code, const std::string& message, int line, int column)
    : Error(code,
            "line " + std::to_string(line) +
                (column > 0 ? ", column " + std::to_string(column) : std::string()) + ": " + message,
            message),
      line_(line),
      column_(column) {}

}  // namespace robospeech
