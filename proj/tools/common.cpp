#include "common.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "robospeech/error.hpp"
#include "robospeech/portnet/broker.hpp"

namespace robospeech::tools {

std::string data_dir() {
  if (const char* env = std::getenv("ROBOSPEECH_DATA")) return env;
  if (std::filesystem::is_directory(ROBOSPEECH_SOURCE_DATA_DIR)) return ROBOSPEECH_SOURCE_DATA_DIR;
  return ROBOSPEECH_INSTALL_DATA_DIR;
}

std::string data_path(const std::string& relative) {
  return (std::filesystem::path(data_dir()) / relative).string();
}

portnet::Endpoint broker_endpoint(std::optional<std::uint16_t> flag) {
  portnet::Endpoint e;
  e.port = portnet::resolve_broker_port(flag);
  return e;
}

std::atomic<bool>& stop_flag() {
  static std::atomic<bool> flag{false};
  return flag;
}

void install_stop_handler() {
  auto handler = [](int) { stop_flag() = true; };
  std::signal(SIGINT, handler);
  std::signal(SIGTERM, handler);
}

int guarded(int (*body)(int, char**), int argc, char** argv) {
  try {
    return body(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace robospeech::tools
