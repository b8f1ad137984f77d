#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace robospeech::gateway {

// Minimal RFC 6455 server side: text frames, ping/pong and close. No
// extensions, no fragmented sends.

// base64(SHA-1(key + GUID)).
std::string websocket_accept_key(std::string_view client_key);

// Sec-WebSocket-Key of an HTTP upgrade request, or nullopt if the request
// is not a WebSocket upgrade.
std::optional<std::string> upgrade_key(std::string_view request);

std::string handshake_response(std::string_view client_key);

enum class Opcode : std::uint8_t {
  kContinuation = 0x0,
  kText = 0x1,
  kBinary = 0x2,
  kClose = 0x8,
  kPing = 0x9,
  kPong = 0xA,
};

struct WsFrame {
  bool fin = true;
  Opcode opcode = Opcode::kText;
  std::string payload;
};

// Server frames are unmasked; clients must pass a mask.
std::string encode_frame(Opcode opcode, std::string_view payload,
                         std::optional<std::uint32_t> mask = std::nullopt);

// Incremental frame parser. Throws Error(kInvalidArgument) on protocol
// violations (oversized length, reserved bits).
class FrameDecoder {
 public:
  void feed(std::string_view bytes) { buffer_.append(bytes); }
  std::optional<WsFrame> next();

 private:
  std::string buffer_;
};

}  // namespace robospeech::gateway
