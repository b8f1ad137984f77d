#pragma once

#include <string>
#include <vector>

#include "robospeech/decoder/session_record.hpp"
#include "robospeech/sim/session.hpp"

namespace robospeech::sim {

// Timelines use the session-record line format, so a file written here can
// be replayed by `recognize --file`.
void write_timeline(const std::string& path, const std::vector<decoder::RecordEntry>& timeline);
std::vector<decoder::RecordEntry> read_timeline(const std::string& path);

// Gold TSV (child and robot rows).
void write_gold(const std::string& path, const GoldAnnotation& gold);

// Oracle labels, one row per child segment: `start<TAB>end<TAB>label`.
std::string write_oracle_tsv(const GoldAnnotation& gold);

}  // namespace robospeech::sim
