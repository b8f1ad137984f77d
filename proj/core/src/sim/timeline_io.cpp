#include "robospeech/sim/timeline_io.hpp"

#include <charconv>
#include <fstream>

#include "robospeech/error.hpp"

namespace robospeech::sim {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kMissingFile, "cannot write " + path);
  return out;
}

std::string number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void write_timeline(const std::string& path, const std::vector<decoder::RecordEntry>& timeline) {
  auto out = open_out(path);
  for (const auto& entry : timeline) out << decoder::record_line(entry) << '\n';
  if (!out) throw Error(ErrorCode::kMissingFile, "write failed: " + path);
}

std::vector<decoder::RecordEntry> read_timeline(const std::string& path) {
  return decoder::read_session_record(path);
}

void write_gold(const std::string& path, const GoldAnnotation& gold) {
  auto out = open_out(path);
  out << eval::write_gold_tsv(gold.entries());
  if (!out) throw Error(ErrorCode::kMissingFile, "write failed: " + path);
}

std::string write_oracle_tsv(const GoldAnnotation& gold) {
  std::string out;
  for (const auto& s : gold.segments) {
    out += number(s.segment.start) + '\t' + number(s.segment.end) + '\t' + s.oracle.to_string() + '\n';
  }
  return out;
}

}  // namespace robospeech::sim
