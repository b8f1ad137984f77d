#include "robospeech/gateway/websocket.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include <openssl/evp.h>

#include "robospeech/error.hpp"

namespace robospeech::gateway {

namespace {

constexpr const char* kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
constexpr std::uint64_t kMaxPayload = 1 << 20;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

}  // namespace

std::string websocket_accept_key(std::string_view client_key) {
  std::string input = std::string(client_key) + kGuid;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int size = 0;
  EVP_Digest(input.data(), input.size(), digest, &size, EVP_sha1(), nullptr);
  unsigned char out[4 * ((EVP_MAX_MD_SIZE + 2) / 3) + 1];
  int n = EVP_EncodeBlock(out, digest, static_cast<int>(size));
  return std::string(reinterpret_cast<char*>(out), static_cast<std::size_t>(n));
}

std::optional<std::string> upgrade_key(std::string_view request) {
  std::istringstream in{std::string(request)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("GET ", 0) != 0) return std::nullopt;
  std::optional<std::string> key;
  bool upgrade = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) break;
    auto colon = line.find(':');
    if (colon == std::string::npos) continue;
    std::string name = lower(trim(line.substr(0, colon)));
    std::string value = trim(line.substr(colon + 1));
    if (name == "upgrade" && lower(value) == "websocket") upgrade = true;
    if (name == "sec-websocket-key") key = value;
  }
  if (!upgrade || !key || key->empty()) return std::nullopt;
  return key;
}

std::string handshake_response(std::string_view client_key) {
  return "HTTP/1.1 101 Switching Protocols\r\n"
         "Upgrade: websocket\r\n"
         "Connection: Upgrade\r\n"
         "Sec-WebSocket-Accept: " +
         websocket_accept_key(client_key) + "\r\n\r\n";
}

std::string encode_frame(Opcode opcode, std::string_view payload, std::optional<std::uint32_t> mask) {
  std::string out;
  out.push_back(static_cast<char>(0x80 | static_cast<std::uint8_t>(opcode)));
  const std::uint8_t mask_bit = mask ? 0x80 : 0x00;
  const std::uint64_t n = payload.size();
  if (n < 126) {
    out.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    out.push_back(static_cast<char>(mask_bit | 126));
    out.push_back(static_cast<char>(n >> 8));
    out.push_back(static_cast<char>(n & 0xFF));
  } else {
    out.push_back(static_cast<char>(mask_bit | 127));
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((n >> shift) & 0xFF));
  }
  if (!mask) {
    out.append(payload);
    return out;
  }
  char key[4];
  for (int i = 0; i < 4; ++i) key[i] = static_cast<char>((*mask >> (24 - 8 * i)) & 0xFF);
  out.append(key, 4);
  for (std::size_t i = 0; i < payload.size(); ++i) out.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  return out;
}

std::optional<WsFrame> FrameDecoder::next() {
  auto byte = [this](std::size_t i) { return static_cast<std::uint8_t>(buffer_[i]); };
  if (buffer_.size() < 2) return std::nullopt;
  if (byte(0) & 0x70) throw Error(ErrorCode::kInvalidArgument, "websocket frame uses reserved bits");
  const bool masked = byte(1) & 0x80;
  std::uint64_t n = byte(1) & 0x7F;
  std::size_t pos = 2;
  if (n == 126) {
    if (buffer_.size() < 4) return std::nullopt;
    n = (std::uint64_t{byte(2)} << 8) | byte(3);
    pos = 4;
  } else if (n == 127) {
    if (buffer_.size() < 10) return std::nullopt;
    n = 0;
    for (std::size_t i = 2; i < 10; ++i) n = (n << 8) | byte(i);
    pos = 10;
  }
  if (n > kMaxPayload) throw Error(ErrorCode::kInvalidArgument, "websocket frame too large");
  const std::size_t need = pos + (masked ? 4 : 0) + static_cast<std::size_t>(n);
  if (buffer_.size() < need) return std::nullopt;

  WsFrame frame;
  frame.fin = byte(0) & 0x80;
  frame.opcode = static_cast<Opcode>(byte(0) & 0x0F);
  std::string key = masked ? buffer_.substr(pos, 4) : std::string();
  if (masked) pos += 4;
  frame.payload = buffer_.substr(pos, static_cast<std::size_t>(n));
  if (masked) {
    for (std::size_t i = 0; i < frame.payload.size(); ++i) frame.payload[i] ^= key[i % 4];
  }
  buffer_.erase(0, need);
  return frame;
}

}  // namespace robospeech::gateway
