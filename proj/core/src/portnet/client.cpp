#include "robospeech/portnet/client.hpp"

#include <chrono>
#include <cmath>
#include <mutex>
#include <sstream>

#include "robospeech/error.hpp"

namespace robospeech::portnet {

double session_clock() {
  static const auto epoch = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch).count();
}

struct Port::State {
  Socket socket;
  LineReader reader{socket};
  Clock clock;
  double last_stamp = 0.0;
  bool open = true;
  std::mutex write_mutex;

  explicit State(Socket s) : socket(std::move(s)), reader(socket) {}
};

namespace {

// Reads until the broker acknowledges or rejects the open request.
void await_ack(Socket& socket, LineReader& reader, const std::string& name) {
  std::string line;
  while (true) {
    ReadStatus status = reader.read_line(line, 5000);
    if (status != ReadStatus::kLine) {
      throw Error(ErrorCode::kBrokerUnreachable, "no reply while opening " + name);
    }
    if (line.rfind("!ok", 0) == 0) return;
    if (line.rfind("!err", 0) == 0) {
      std::istringstream in(line.substr(5));
      std::string code;
      in >> code;
      if (code == "name-collision") throw Error(ErrorCode::kNameCollision, name);
      if (code == "invalid-name") throw Error(ErrorCode::kInvalidName, name);
      throw Error(ErrorCode::kInvalidArgument, line);
    }
  }
  (void)socket;
}

}  // namespace

Port::Port(PortName name, Direction direction, std::unique_ptr<State> state)
    : name_(std::move(name)), direction_(direction), state_(std::move(state)) {}

Port::Port(Port&&) noexcept = default;
Port& Port::operator=(Port&&) noexcept = default;
Port::~Port() = default;

Port Port::open(const Endpoint& broker, std::string_view name, Direction direction, Clock clock) {
  PortName port_name = PortName::parse(name);
  auto state = std::make_unique<State>(connect_tcp(broker.host, broker.port));
  state->clock = clock ? std::move(clock) : Clock(session_clock);
  std::string request = std::string("!open ") + (direction == Direction::kOut ? "out " : "in ") +
                        port_name.str() + "\n";
  if (!state->socket.send_all(request)) {
    throw Error(ErrorCode::kBrokerUnreachable, "broker closed connection");
  }
  await_ack(state->socket, state->reader, port_name.str());
  return Port(std::move(port_name), direction, std::move(state));
}

bool Port::is_open() const { return state_ && state_->open; }

void Port::publish(std::string_view payload) {
  if (!is_open()) throw Error(ErrorCode::kClosedHandle, name_.str());
  publish_at(payload, std::max(state_->clock(), state_->last_stamp));
}

void Port::publish_at(std::string_view payload, double timestamp) {
  if (!is_open()) throw Error(ErrorCode::kClosedHandle, name_.str());
  if (direction_ != Direction::kOut) {
    throw Error(ErrorCode::kInvalidArgument, "cannot publish on in-port " + name_.str());
  }
  if (payload.find('\n') != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "payload contains a newline");
  }
  if (!std::isfinite(timestamp)) throw Error(ErrorCode::kInvalidArgument, "timestamp not finite");
  std::lock_guard lock(state_->write_mutex);
  if (timestamp < state_->last_stamp) {
    throw Error(ErrorCode::kNonMonotonicTimestamp,
                format_timestamp(timestamp) + " < " + format_timestamp(state_->last_stamp));
  }
  state_->last_stamp = timestamp;
  std::string line = encode_line(PortMessage{name_, timestamp, std::string(payload)});
  line += '\n';
  if (!state_->socket.send_all(line)) {
    throw Error(ErrorCode::kBrokerUnreachable, "broker closed connection");
  }
}

std::optional<PortMessage> Port::next_message(double timeout_seconds) {
  if (!is_open()) throw Error(ErrorCode::kClosedHandle, name_.str());
  if (direction_ != Direction::kIn) {
    throw Error(ErrorCode::kInvalidArgument, "cannot read from out-port " + name_.str());
  }
  using Clock = std::chrono::steady_clock;
  const auto deadline =
      Clock::now() + std::chrono::microseconds(static_cast<long long>(
                         std::max(0.0, timeout_seconds) * 1e6));
  std::string line;
  while (true) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    int wait = static_cast<int>(std::max<long long>(0, left.count()));
    ReadStatus status = state_->reader.read_line(line, wait);
    if (status == ReadStatus::kTimeout) return std::nullopt;
    if (status == ReadStatus::kClosed) {
      state_->open = false;
      throw Error(ErrorCode::kBrokerUnreachable, "broker closed " + name_.str());
    }
    if (!line.empty() && line.front() == '!') continue;
    if (auto message = decode_line(line)) return message;
  }
}

void Port::close() {
  if (state_ && state_->open) {
    state_->open = false;
    state_->socket.close();
  }
}

std::vector<std::string> list_ports(const Endpoint& broker) {
  Socket socket = connect_tcp(broker.host, broker.port);
  LineReader reader(socket);
  if (!socket.send_all("!list\n")) throw Error(ErrorCode::kBrokerUnreachable, "list");
  std::string line;
  if (reader.read_line(line, 5000) != ReadStatus::kLine || line.rfind("!ports", 0) != 0) {
    throw Error(ErrorCode::kBrokerUnreachable, "no reply to list");
  }
  std::istringstream in(line.substr(6));
  std::vector<std::string> names;
  std::string name;
  while (in >> name) names.push_back(name);
  return names;
}

}  // namespace robospeech::portnet
