#include "robospeech/portnet/broker.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <iostream>
#include <set>
#include <sstream>

#include "robospeech/error.hpp"
#include "robospeech/portnet/port_name.hpp"

namespace robospeech::portnet {

std::uint16_t resolve_broker_port(std::optional<std::uint16_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kBrokerPortEnv)) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0 && value < 65536) {
      return static_cast<std::uint16_t>(value);
    }
    std::cerr << "[portnet] ignoring " << kBrokerPortEnv << "='" << env << "'\n";
  }
  return kDefaultBrokerPort;
}

class Broker::Connection {
 public:
  explicit Connection(Socket socket) : socket_(std::move(socket)) {}

  void enqueue(std::string line) {
    {
      std::lock_guard lock(mutex_);
      if (closed_) return;
      outbound_.push_back(std::move(line));
    }
    ready_.notify_one();
  }

  void writer_loop() {
    std::unique_lock lock(mutex_);
    while (true) {
      ready_.wait(lock, [&] { return closed_ || !outbound_.empty(); });
      if (outbound_.empty() && closed_) return;
      std::string batch;
      while (!outbound_.empty()) {
        batch += outbound_.front();
        batch += '\n';
        outbound_.pop_front();
      }
      lock.unlock();
      bool ok = socket_.send_all(batch);
      lock.lock();
      if (!ok) {
        closed_ = true;
        outbound_.clear();
        return;
      }
    }
  }

  void close() {
    {
      std::lock_guard lock(mutex_);
      closed_ = true;
    }
    ready_.notify_all();
    socket_.shutdown();
  }

  const Socket& socket() const { return socket_; }

  std::string port_name;
  bool is_out = false;

 private:
  Socket socket_;
  std::mutex mutex_;
  std::condition_variable ready_;
  std::deque<std::string> outbound_;
  bool closed_ = false;
};

Broker::Broker(BrokerOptions options) : options_(std::move(options)) {}

Broker::~Broker() { stop(); }

void Broker::start() {
  if (running_) return;
  listener_ = listen_tcp(options_.bind_address, options_.port);
  port_ = local_port(listener_);
  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void Broker::stop() {
  if (!running_.exchange(false)) return;
  if (accept_thread_.joinable()) accept_thread_.join();
  listener_.close();
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(mutex_);
    for (auto& connection : connections_) connection->close();
    workers.swap(workers_);
  }
  for (auto& worker : workers) {
    if (worker.joinable()) worker.join();
  }
  std::lock_guard lock(mutex_);
  connections_.clear();
  out_ports_.clear();
  subscribers_.clear();
}

std::vector<std::string> Broker::ports() const {
  std::lock_guard lock(mutex_);
  std::set<std::string> names;
  for (const auto& [name, connection] : out_ports_) {
    if (!connection.expired()) names.insert(name);
  }
  for (const auto& [name, list] : subscribers_) {
    if (std::any_of(list.begin(), list.end(), [](const auto& w) { return !w.expired(); })) {
      names.insert(name);
    }
  }
  return {names.begin(), names.end()};
}

void Broker::accept_loop() {
  while (running_) {
    auto client = accept_client(listener_, 50);
    if (!client) continue;
    auto connection = std::make_shared<Connection>(std::move(*client));
    std::lock_guard lock(mutex_);
    if (!running_) {
      connection->close();
      break;
    }
    connections_.push_back(connection);
    workers_.emplace_back([connection] { connection->writer_loop(); });
    workers_.emplace_back([this, connection] { serve(connection); });
  }
}

void Broker::serve(std::shared_ptr<Connection> connection) {
  LineReader reader(connection->socket());
  std::string line;
  while (running_) {
    ReadStatus status = reader.read_line(line, 200);
    if (status == ReadStatus::kTimeout) continue;
    if (status == ReadStatus::kClosed) break;
    if (!line.empty() && line.front() == '!') {
      handle_control(connection, line);
    } else {
      route(connection, line);
    }
  }
  drop(connection);
}

void Broker::handle_control(const std::shared_ptr<Connection>& connection,
                            const std::string& line) {
  std::istringstream in(line);
  std::string verb;
  in >> verb;
  if (verb == "!list") {
    std::string reply = "!ports";
    for (const auto& name : ports()) reply += " " + name;
    connection->enqueue(reply);
    return;
  }
  if (verb != "!open") {
    connection->enqueue("!err invalid-argument unknown command " + verb);
    return;
  }
  std::string direction, name;
  in >> direction >> name;
  if (!PortName::is_valid(name) || (direction != "out" && direction != "in")) {
    connection->enqueue("!err invalid-name " + name);
    return;
  }
  std::lock_guard lock(mutex_);
  if (!connection->port_name.empty()) {
    connection->enqueue("!err invalid-argument connection already bound");
    return;
  }
  if (direction == "out") {
    auto it = out_ports_.find(name);
    if (it != out_ports_.end() && !it->second.expired()) {
      connection->enqueue("!err name-collision " + name);
      return;
    }
    out_ports_[name] = connection;
    connection->is_out = true;
  } else {
    subscribers_[name].push_back(connection);
  }
  connection->port_name = name;
  // Ack is queued under the routing lock, so every delivery follows it.
  connection->enqueue("!ok " + name);
}

void Broker::route(const std::shared_ptr<Connection>& from, const std::string& line) {
  auto message = decode_line(line);
  if (!message || !from->is_out || message->topic.str() != from->port_name) {
    from->enqueue("!err invalid-argument cannot publish: " + line.substr(0, 80));
    return;
  }
  std::lock_guard lock(mutex_);
  auto it = subscribers_.find(from->port_name);
  if (it == subscribers_.end()) return;
  auto& list = it->second;
  list.erase(std::remove_if(list.begin(), list.end(), [](const auto& w) { return w.expired(); }),
             list.end());
  for (const auto& weak : list) {
    if (auto target = weak.lock()) target->enqueue(line);
  }
}

void Broker::drop(const std::shared_ptr<Connection>& connection) {
  connection->close();
  std::lock_guard lock(mutex_);
  if (connection->is_out) {
    auto it = out_ports_.find(connection->port_name);
    if (it != out_ports_.end() && it->second.lock() == connection) out_ports_.erase(it);
  } else if (!connection->port_name.empty()) {
    auto& list = subscribers_[connection->port_name];
    list.erase(std::remove_if(list.begin(), list.end(),
                              [&](const auto& w) {
                                auto locked = w.lock();
                                return !locked || locked == connection;
                              }),
               list.end());
  }
  connections_.erase(std::remove(connections_.begin(), connections_.end(), connection),
                     connections_.end());
}

}  // namespace robospeech::portnet
