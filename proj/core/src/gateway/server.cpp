#include "robospeech/gateway/server.hpp"

#include <condition_variable>
#include <cstdio>
#include <deque>

#include "robospeech/gateway/websocket.hpp"
#include "robospeech/topics.hpp"

namespace robospeech::gateway {

class GatewayServer::Connection {
 public:
  explicit Connection(portnet::Socket socket) : socket_(std::move(socket)) {}

  ~Connection() {
    close();
    if (reader_.joinable()) reader_.join();
    if (writer_.joinable()) writer_.join();
  }

  void start(GatewayServer& server) {
    writer_ = std::thread([this] { write_loop(); });
    reader_ = std::thread([this, &server] { read_loop(server); });
  }

  void send(const std::string& frame) {
    {
      std::lock_guard lock(mutex_);
      if (closed_) return;
      outbox_.push_back(frame);
    }
    wake_.notify_one();
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    wake_.notify_all();
    socket_.shutdown();
  }

  bool closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
  }

 private:
  void write_loop() {
    std::unique_lock lock(mutex_);
    for (;;) {
      wake_.wait(lock, [this] { return closed_ || (ready_ && !outbox_.empty()); });
      if (closed_) return;
      std::string frame = std::move(outbox_.front());
      outbox_.pop_front();
      bool ws = websocket_;
      lock.unlock();
      bool ok = socket_.send_all(ws ? encode_frame(Opcode::kText, frame) : frame + "\n");
      lock.lock();
      if (!ok) closed_ = true;
    }
  }

  void set_ready(bool websocket) {
    {
      std::lock_guard lock(mutex_);
      websocket_ = websocket;
      ready_ = true;
    }
    wake_.notify_all();
  }

  void read_loop(GatewayServer& server) {
    portnet::LineReader reader(socket_);
    std::string line;
    if (reader.read_line(line, -1) != portnet::ReadStatus::kLine) return close();

    if (line.rfind("GET ", 0) != 0) {
      set_ready(false);
      do {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) server.handle_command(*this, line);
      } while (reader.read_line(line, -1) == portnet::ReadStatus::kLine);
      return close();
    }

    std::string request = line + "\n";
    while (reader.read_line(line, 5000) == portnet::ReadStatus::kLine) {
      request += line + "\n";
      if (line.empty() || line == "\r") break;
    }
    auto key = upgrade_key(request);
    if (!key) {
      socket_.send_all("HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n");
      return close();
    }
    if (!socket_.send_all(handshake_response(*key))) return close();
    set_ready(true);

    FrameDecoder decoder;
    decoder.feed(reader.take_buffer());
    std::string message;
    try {
      for (;;) {
        while (auto frame = decoder.next()) {
          switch (frame->opcode) {
            case Opcode::kClose:
              socket_.send_all(encode_frame(Opcode::kClose, ""));
              return close();
            case Opcode::kPing:
              socket_.send_all(encode_frame(Opcode::kPong, frame->payload));
              break;
            case Opcode::kText:
            case Opcode::kContinuation:
              message += frame->payload;
              if (frame->fin) {
                server.handle_command(*this, message);
                message.clear();
              }
              break;
            default:
              break;
          }
        }
        auto bytes = reader.read_some(-1);
        if (!bytes || bytes->empty()) return close();
        decoder.feed(*bytes);
      }
    } catch (const Error&) {
      close();
    }
  }

  portnet::Socket socket_;
  mutable std::mutex mutex_;
  std::condition_variable wake_;
  std::deque<std::string> outbox_;
  bool closed_ = false;
  bool ready_ = false;
  bool websocket_ = false;
  std::thread reader_, writer_;
};

GatewayServer::GatewayServer(std::shared_ptr<GatewayCore> core, GatewayOptions options)
    : core_(std::move(core)), options_(std::move(options)) {}

GatewayServer::~GatewayServer() { stop(); }

void GatewayServer::start() {
  if (running_) return;
  std::vector<portnet::Port> inputs;
  for (const auto& topic : bridged_topics()) inputs.push_back(portnet::subscribe(options_.broker, topic));
  inputs.push_back(portnet::subscribe(options_.broker, topics::kGrammar));
  operator_out_ = std::make_unique<portnet::Port>(
      portnet::Port::open(options_.broker, topics::kOperator, portnet::Direction::kOut));
  listener_ = portnet::listen_tcp(options_.host, options_.port);
  port_ = portnet::local_port(listener_);
  running_ = true;
  for (auto& port : inputs) {
    bridges_.emplace_back([this, p = std::move(port)]() mutable { bridge_loop(std::move(p)); });
  }
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void GatewayServer::stop() {
  if (!running_.exchange(false)) return;
  listener_.shutdown();
  if (accept_thread_.joinable()) accept_thread_.join();
  for (auto& t : bridges_) t.join();
  bridges_.clear();
  std::vector<std::shared_ptr<Connection>> connections;
  {
    std::lock_guard lock(connections_mutex_);
    connections.swap(connections_);
  }
  for (auto& c : connections) c->close();
  connections.clear();
  listener_.close();
  operator_out_.reset();
}

std::size_t GatewayServer::connections() const {
  std::lock_guard lock(connections_mutex_);
  std::size_t n = 0;
  for (const auto& c : connections_) n += c->closed() ? 0 : 1;
  return n;
}

void GatewayServer::accept_loop() {
  while (running_) {
    auto client = portnet::accept_client(listener_, 100);
    if (!client) continue;
    auto connection = std::make_shared<Connection>(std::move(*client));
    std::vector<std::shared_ptr<Connection>> finished;
    {
      std::lock_guard lock(connections_mutex_);
      for (auto it = connections_.begin(); it != connections_.end();) {
        if ((*it)->closed()) {
          finished.push_back(std::move(*it));
          it = connections_.erase(it);
        } else {
          ++it;
        }
      }
      connection->start(*this);
      connections_.push_back(std::move(connection));
    }
  }
}

void GatewayServer::bridge_loop(portnet::Port port) {
  while (running_) {
    auto message = port.next_message(0.1);
    if (!message) continue;
    try {
      if (auto event = core_->observe(*message)) broadcast(event->to_json());
    } catch (const Error& e) {
      std::fprintf(stderr, "[gateway] %s\n", e.what());
    }
  }
}

void GatewayServer::broadcast(const std::string& frame) {
  std::lock_guard lock(connections_mutex_);
  for (const auto& c : connections_) c->send(frame);
}

void GatewayServer::handle_command(Connection& connection, const std::string& frame) {
  try {
    OperatorCommand command = core_->command(frame);
    {
      std::lock_guard lock(operator_mutex_);
      operator_out_->publish(command.forward_payload());
    }
    connection.send(ack_frame(command));
  } catch (const Error& e) {
    connection.send(error_frame(e));
  }
}

}  // namespace robospeech::gateway
