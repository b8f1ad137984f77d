#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace robospeech::grammar {

// Expression tree of the supported JSGF subset: sequences, `|` alternations,
// `[...]` optionals, words and `<rule>` references. Recursion, repetition,
// weights, tags and imports are rejected by the parser.
struct Expr {
  enum class Kind { kSequence, kAlternation, kOptional, kToken, kRuleRef };

  Kind kind = Kind::kToken;
  std::string text;            // word for kToken, rule name for kRuleRef
  std::vector<Expr> children;  // items, branches, or the single optional body

  static Expr token(std::string word) { return {Kind::kToken, std::move(word), {}}; }
  static Expr rule_ref(std::string name) { return {Kind::kRuleRef, std::move(name), {}}; }
  static Expr sequence(std::vector<Expr> items) { return {Kind::kSequence, {}, std::move(items)}; }
  static Expr alternation(std::vector<Expr> branches) {
    return {Kind::kAlternation, {}, std::move(branches)};
  }
  static Expr optional(Expr body) { return {Kind::kOptional, {}, {std::move(body)}}; }

  bool operator==(const Expr&) const = default;
};

struct GrammarAst {
  std::string name;
  std::map<std::string, Expr> rules;
  std::set<std::string> public_rules;

  bool operator==(const GrammarAst&) const = default;
};

// Parses and validates. Words are lowercased. Throws ParseError(kSyntaxError)
// with line/column, Error(kUnresolvedRule) or Error(kRecursiveRule).
GrammarAst parse_jsgf(std::string_view text);

// Checks rule references, the public-rule requirement and acyclicity.
void validate(const GrammarAst& ast);

// Canonical JSGF text; parse_jsgf(to_jsgf(ast)) == ast for normalized ASTs.
std::string to_jsgf(const GrammarAst& ast);
std::string to_jsgf(const Expr& expr);

// Single public rule `<name>` that is the alternation of the given phrases.
GrammarAst phrase_list_grammar(std::string grammar_name, const std::vector<std::string>& phrases);

}  // namespace robospeech::grammar
