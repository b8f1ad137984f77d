#include "robospeech/grammar/library.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "robospeech/error.hpp"

namespace robospeech::grammar {

GrammarLibrary GrammarLibrary::load_directory(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::kMissingFile, "no grammar directory " + dir);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".gram") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  GrammarLibrary library;
  for (const auto& path : files) {
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    try {
      library.add(path.stem().string(), parse_jsgf(text.str()));
    } catch (const ParseError& e) {
      throw ParseError(e.code(), path.filename().string() + ": " + e.detail(), e.line(), e.column());
    }
  }
  return library;
}

void GrammarLibrary::add(const std::string& id, const GrammarAst& ast, bool silence) {
  fsts_[id] = std::make_shared<const GrammarFst>(compile_grammar(ast, silence, id));
  asts_[id] = ast;
}

void GrammarLibrary::add(std::shared_ptr<const GrammarFst> fst) {
  std::string id = fst->grammar_id();
  fsts_[id] = std::move(fst);
}

std::shared_ptr<const GrammarFst> GrammarLibrary::get(const std::string& id) const {
  auto it = fsts_.find(id);
  if (it == fsts_.end()) throw Error(ErrorCode::kNoGrammar, "unknown grammar '" + id + "'");
  return it->second;
}

const GrammarAst& GrammarLibrary::ast(const std::string& id) const {
  auto it = asts_.find(id);
  if (it == asts_.end()) throw Error(ErrorCode::kNoGrammar, "no source for grammar '" + id + "'");
  return it->second;
}

std::vector<std::string> GrammarLibrary::ids() const {
  std::vector<std::string> out;
  for (const auto& [id, fst] : fsts_) out.push_back(id);
  return out;
}

}  // namespace robospeech::grammar
