#include <algorithm>
#include <charconv>
#include <sstream>

#include "robospeech/error.hpp"
#include "robospeech/grammar/fst.hpp"

namespace robospeech::grammar {
namespace {

std::string format_weight(double w) {
  char buffer[64];
  auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), w);
  return ec == std::errc() ? std::string(buffer, end) : std::string("0");
}

double parse_weight(const std::string& text, int line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(ErrorCode::kSyntaxError, "bad weight '" + text + "'", line);
  }
  return value;
}

int parse_int(const std::string& text, int line) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value < 0) {
    throw ParseError(ErrorCode::kSyntaxError, "bad integer '" + text + "'", line);
  }
  return value;
}

}  // namespace

std::string write_fst_text(const GrammarFst& fst) {
  std::string out;
  const auto& symbols = fst.symbols();
  for (int state = 0; state < fst.num_states(); ++state) {
    for (const auto& arc : fst.arcs_from(state)) {
      out += std::to_string(arc.from) + ' ' + std::to_string(arc.to) + ' ' +
             symbols.word(arc.ilabel) + ' ' + symbols.word(arc.olabel) + ' ' +
             format_weight(arc.weight) + '\n';
    }
    if (fst.is_final(state)) {
      out += std::to_string(state) + ' ' + format_weight(fst.final_weight(state)) + '\n';
    }
  }
  return out;
}

std::string write_symbols_text(const SymbolTable& symbols) {
  std::string out;
  for (std::size_t id = 0; id < symbols.size(); ++id) {
    out += symbols.word(static_cast<int>(id)) + ' ' + std::to_string(id) + '\n';
  }
  return out;
}

GrammarFst read_fst_text(std::string_view fst_text, std::string_view symbols_text,
                         std::string grammar_id) {
  std::map<std::string, int> ids;
  std::vector<std::pair<int, std::string>> table;
  {
    std::istringstream in{std::string(symbols_text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      std::istringstream fields(line);
      std::string word, id;
      if (!(fields >> word)) continue;
      if (!(fields >> id)) throw ParseError(ErrorCode::kSyntaxError, "missing symbol id", number);
      table.emplace_back(parse_int(id, number), word);
    }
  }
  std::sort(table.begin(), table.end());
  SymbolTable symbols;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (table[i].first != static_cast<int>(i)) {
      throw ParseError(ErrorCode::kSyntaxError, "symbol ids must be dense", static_cast<int>(i) + 1);
    }
    if (i == 0) {
      if (table[i].second != kEpsilonSymbol) {
        throw ParseError(ErrorCode::kSyntaxError, "id 0 must be <eps>", 1);
      }
      continue;
    }
    symbols.add(table[i].second);
  }

  std::vector<FstArc> arcs;
  std::map<int, double> finals;
  int max_state = -1;
  std::istringstream in{std::string(fst_text)};
  std::string line;
  int number = 0;
  auto symbol = [&](const std::string& word) {
    auto id = symbols.find(word);
    if (!id) throw ParseError(ErrorCode::kSyntaxError, "unknown symbol '" + word + "'", number);
    return *id;
  };
  while (std::getline(in, line)) {
    ++number;
    std::istringstream fields(line);
    std::vector<std::string> parts;
    std::string part;
    while (fields >> part) parts.push_back(part);
    if (parts.empty()) continue;
    if (parts.size() == 1 || parts.size() == 2) {
      int state = parse_int(parts[0], number);
      finals[state] = parts.size() == 2 ? parse_weight(parts[1], number) : 0.0;
      max_state = std::max(max_state, state);
    } else if (parts.size() == 4 || parts.size() == 5) {
      FstArc arc;
      arc.from = parse_int(parts[0], number);
      arc.to = parse_int(parts[1], number);
      arc.ilabel = symbol(parts[2]);
      arc.olabel = symbol(parts[3]);
      arc.weight = parts.size() == 5 ? parse_weight(parts[4], number) : 0.0;
      max_state = std::max({max_state, arc.from, arc.to});
      arcs.push_back(arc);
    } else {
      throw ParseError(ErrorCode::kSyntaxError, "expected 1, 2, 4 or 5 fields", number);
    }
  }
  if (max_state < 0) throw ParseError(ErrorCode::kSyntaxError, "empty FST", 1);
  return GrammarFst(std::move(grammar_id), std::move(symbols), max_state + 1, std::move(finals),
                    std::move(arcs));
}

}  // namespace robospeech::grammar
