#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "common.hpp"
#include "robospeech/grammar/fst.hpp"
#include "robospeech/grammar/jsgf.hpp"

using namespace robospeech;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) throw Error(ErrorCode::kMissingFile, "cannot write " + path);
}

int run(int argc, char** argv) {
  CLI::App app{"Compile a JSGF grammar to a weighted word FST"};
  std::string input, id, fst_out, syms_out, lexicon_path;
  bool no_silence = false, enumerate = false, prons = false;
  std::size_t limit = 10000;
  app.add_option("grammar", input, "JSGF file")->required()->check(CLI::ExistingFile);
  app.add_option("--id", id, "Grammar id (default: file stem)");
  app.add_flag("--no-silence", no_silence, "Leave out the \"!SIL\" branch");
  app.add_option("--fst", fst_out, "Write the FST in text form");
  app.add_option("--symbols", syms_out, "Write the symbol table");
  app.add_option("--lexicon", lexicon_path, "Pronunciation dictionary (default: data/lexicon.txt)");
  app.add_flag("--pronunciations", prons, "Print the pronunciation of every word");
  app.add_flag("--enumerate", enumerate, "Print every accepted sentence");
  app.add_option("--limit", limit, "Maximum sentences to enumerate");
  CLI11_PARSE(app, argc, argv);

  if (id.empty()) id = std::filesystem::path(input).stem().string();
  auto ast = grammar::parse_jsgf(slurp(input));
  auto fst = grammar::compile_grammar(ast, !no_silence, id);

  if (!fst_out.empty()) spit(fst_out, grammar::write_fst_text(fst));
  if (!syms_out.empty()) spit(syms_out, grammar::write_symbols_text(fst.symbols()));

  std::cout << "grammar " << id << ": " << fst.num_states() << " states, " << fst.arcs().size()
            << " arcs, " << fst.symbols().size() - 1 << " words\n";
  if (prons) {
    auto lexicon = grammar::Lexicon::load(lexicon_path.empty() ? tools::data_path("lexicon.txt") : lexicon_path);
    grammar::attach_lexicon(fst, lexicon);
    for (const auto& [word, p] : fst.pronunciations()) {
      for (const auto& variant : p.variants) {
        std::cout << word << (p.fallback ? " (letters)" : "");
        for (const auto& phone : variant) std::cout << ' ' << phone;
        std::cout << '\n';
      }
    }
  }
  if (enumerate) {
    for (const auto& sentence : grammar::enumerate_language(fst, limit)) std::cout << sentence << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return tools::guarded(run, argc, argv); }
