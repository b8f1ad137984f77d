#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robospeech {

enum class ErrorCode {
  kInvalidArgument,
  // portnet
  kInvalidName,
  kNameCollision,
  kBrokerUnreachable,
  kClosedHandle,
  kNonMonotonicTimestamp,
  // grammar
  kSyntaxError,
  kUnresolvedRule,
  kRecursiveRule,
  kLimitExceeded,
  // decoder
  kOutOfOrderFrame,
  kEvictedFrame,
  kGateSequence,
  kMissingFile,
  kMalformedRecord,
  kNoGrammar,
  // augment
  kEmptyInput,
  kZeroNoise,
  kRateMismatch,
  kNoiseTooShort,
  kUnreadableFile,
  // dialogue
  kIllegalEvent,
  kNoSpeechExpected,
  kNegativeInput,
  // evalkit
  kMarkerSyntax,
  kNoOverlap,
  kZeroTotal,
  kEmptyReference,
  kLogParse,
  // gateway
  kUnbridgedTopic,
  kMalformedJson,
  kUnknownType,
  kNotInGrammar,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix (and without the position for
  // ParseError).
  const std::string& detail() const noexcept { return detail_; }

 protected:
  Error(ErrorCode code, const std::string& full, const std::string& detail);

 private:
  ErrorCode code_;
  std::string detail_;
};

// Syntax and log-parse errors carry a 1-based position.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, const std::string& message, int line, int column = 0);

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace robospeech
