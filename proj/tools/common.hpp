#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>

#include "robospeech/error.hpp"
#include "robospeech/portnet/client.hpp"

namespace robospeech::tools {

// $ROBOSPEECH_DATA, else the source tree's data/ if present, else the
// installed share directory.
std::string data_dir();
std::string data_path(const std::string& relative);

portnet::Endpoint broker_endpoint(std::optional<std::uint16_t> flag);

// Set by SIGINT/SIGTERM once install_stop_handler() has run.
std::atomic<bool>& stop_flag();
void install_stop_handler();

// Runs `body`, printing library errors as `error: ...` with exit code 1.
int guarded(int (*body)(int, char**), int argc, char** argv);

}  // namespace robospeech::tools
