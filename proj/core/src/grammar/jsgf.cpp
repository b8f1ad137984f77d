#include "robospeech/grammar/jsgf.hpp"

#include <cctype>
#include <functional>
#include <sstream>

#include "robospeech/error.hpp"

namespace robospeech::grammar {
namespace {

bool is_word_char(char c) {
  if (std::isspace(static_cast<unsigned char>(c))) return false;
  switch (c) {
    case '(': case ')': case '[': case ']': case '|': case ';': case '<': case '>':
    case '=': case '*': case '+': case '{': case '}': case '/': case '"': case '#':
      return false;
    default:
      return true;
  }
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  GrammarAst parse() {
    GrammarAst ast;
    parse_header();
    expect_keyword("grammar");
    skip_space();
    ast.name = read_name("grammar name");
    expect(';');
    while (true) {
      skip_space();
      if (at_end()) break;
      parse_rule(ast);
    }
    validate(ast);
    return ast;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(ErrorCode::kSyntaxError, message, line_, column_);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (text_.substr(pos_, 2) == "//") {
        while (!at_end() && peek() != '\n') advance();
      } else if (text_.substr(pos_, 2) == "/*") {
        advance();
        advance();
        while (!at_end() && text_.substr(pos_, 2) != "*/") advance();
        if (at_end()) fail("unterminated comment");
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) {
      if (at_end()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "', found '" + peek() + "'");
    }
    advance();
  }

  void parse_header() {
    skip_space();
    if (text_.substr(pos_, 5) != "#JSGF") fail("missing '#JSGF V1.0;' header");
    for (int i = 0; i < 5; ++i) advance();
    skip_space();
    std::string version;
    while (!at_end() && is_word_char(peek())) {
      version += peek();
      advance();
    }
    if (version != "V1.0") fail("unsupported JSGF version '" + version + "'");
    // Optional encoding and locale up to the terminating ';'.
    while (!at_end() && peek() != ';' && peek() != '\n') advance();
    expect(';');
  }

  void expect_keyword(const std::string& keyword) {
    skip_space();
    std::string word = read_word();
    if (word != keyword) fail("expected '" + keyword + "'" + (word.empty() ? "" : ", found '" + word + "'"));
  }

  std::string read_word() {
    std::string word;
    while (!at_end() && is_word_char(peek())) {
      word += peek();
      advance();
    }
    return word;
  }

  std::string read_name(const char* what) {
    std::string name = read_word();
    if (name.empty()) fail(std::string("expected ") + what);
    return name;
  }

  std::string read_rule_name() {
    expect('<');
    std::string name;
    while (!at_end() && peek() != '>') {
      char c = peek();
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-')) {
        fail(std::string("invalid character '") + c + "' in rule name");
      }
      name += c;
      advance();
    }
    if (at_end()) fail("unterminated rule name");
    advance();
    if (name.empty()) fail("empty rule name");
    return name;
  }

  void parse_rule(GrammarAst& ast) {
    bool is_public = false;
    if (peek() != '<') {
      std::string word = read_word();
      if (word == "import") fail("import statements are not supported");
      if (word != "public") fail(word.empty() ? std::string("unexpected '") + peek() + "'"
                                              : "unexpected '" + word + "'");
      is_public = true;
    }
    std::string name = read_rule_name();
    expect('=');
    Expr body = parse_alternation();
    expect(';');
    if (ast.rules.count(name)) fail("rule <" + name + "> defined twice");
    ast.rules.emplace(name, std::move(body));
    if (is_public) ast.public_rules.insert(name);
  }

  Expr parse_alternation() {
    std::vector<Expr> branches;
    branches.push_back(parse_sequence());
    while (true) {
      skip_space();
      if (peek() != '|') break;
      advance();
      branches.push_back(parse_sequence());
    }
    if (branches.size() == 1) return std::move(branches.front());
    return Expr::alternation(std::move(branches));
  }

  Expr parse_sequence() {
    std::vector<Expr> items;
    while (true) {
      skip_space();
      char c = peek();
      if (at_end() || c == '|' || c == ';' || c == ')' || c == ']') break;
      items.push_back(parse_item());
    }
    if (items.empty()) {
      if (at_end()) fail("expected an expansion before end of input");
      fail(std::string("empty expansion before '") + peek() + "'");
    }
    if (items.size() == 1) return std::move(items.front());
    return Expr::sequence(std::move(items));
  }

  Expr parse_item() {
    char c = peek();
    Expr item;
    if (c == '(') {
      advance();
      item = parse_alternation();
      expect(')');
    } else if (c == '[') {
      advance();
      item = Expr::optional(parse_alternation());
      expect(']');
    } else if (c == '<') {
      item = Expr::rule_ref(read_rule_name());
    } else if (is_word_char(c)) {
      item = Expr::token(lowercase(read_word()));
    } else if (c == '*' || c == '+') {
      fail("repetition operators are not supported");
    } else if (c == '/') {
      fail("weights are not supported");
    } else if (c == '{') {
      fail("tags are not supported");
    } else if (c == '"') {
      fail("quoted tokens are not supported");
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
    skip_space();
    if (peek() == '*' || peek() == '+') fail("repetition operators are not supported");
    if (peek() == '{') fail("tags are not supported");
    return item;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

void collect_refs(const Expr& expr, std::vector<std::string>& out) {
  if (expr.kind == Expr::Kind::kRuleRef) out.push_back(expr.text);
  for (const auto& child : expr.children) collect_refs(child, out);
}

bool needs_group(const Expr& child, const Expr& parent) {
  if (parent.kind == Expr::Kind::kSequence) {
    return child.kind == Expr::Kind::kSequence || child.kind == Expr::Kind::kAlternation;
  }
  if (parent.kind == Expr::Kind::kAlternation) return child.kind == Expr::Kind::kAlternation;
  return false;
}

void print(const Expr& expr, std::ostream& out) {
  auto print_child = [&](const Expr& child) {
    if (needs_group(child, expr)) {
      out << '(';
      print(child, out);
      out << ')';
    } else {
      print(child, out);
    }
  };
  switch (expr.kind) {
    case Expr::Kind::kToken:
      out << expr.text;
      break;
    case Expr::Kind::kRuleRef:
      out << '<' << expr.text << '>';
      break;
    case Expr::Kind::kOptional:
      out << '[';
      print(expr.children.front(), out);
      out << ']';
      break;
    case Expr::Kind::kSequence:
      for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i) out << ' ';
        print_child(expr.children[i]);
      }
      break;
    case Expr::Kind::kAlternation:
      for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i) out << " | ";
        print_child(expr.children[i]);
      }
      break;
  }
}

}  // namespace

GrammarAst parse_jsgf(std::string_view text) { return Parser(text).parse(); }

void validate(const GrammarAst& ast) {
  if (ast.public_rules.empty()) {
    throw ParseError(ErrorCode::kSyntaxError, "grammar has no public rule", 1);
  }
  for (const auto& name : ast.public_rules) {
    if (!ast.rules.count(name)) throw Error(ErrorCode::kUnresolvedRule, "<" + name + ">");
  }
  enum class Mark { kNone, kActive, kDone };
  std::map<std::string, Mark> marks;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    auto it = ast.rules.find(name);
    if (it == ast.rules.end()) throw Error(ErrorCode::kUnresolvedRule, "<" + name + ">");
    Mark& mark = marks[name];
    if (mark == Mark::kDone) return;
    if (mark == Mark::kActive) throw Error(ErrorCode::kRecursiveRule, "<" + name + ">");
    mark = Mark::kActive;
    std::vector<std::string> refs;
    collect_refs(it->second, refs);
    for (const auto& ref : refs) visit(ref);
    marks[name] = Mark::kDone;
  };
  for (const auto& [name, body] : ast.rules) visit(name);
}

std::string to_jsgf(const Expr& expr) {
  std::ostringstream out;
  print(expr, out);
  return out.str();
}

std::string to_jsgf(const GrammarAst& ast) {
  std::ostringstream out;
  out << "#JSGF V1.0;\n\ngrammar " << ast.name << ";\n\n";
  for (const auto& [name, body] : ast.rules) {
    if (ast.public_rules.count(name)) out << "public ";
    out << '<' << name << "> = ";
    print(body, out);
    out << ";\n";
  }
  return out.str();
}

GrammarAst phrase_list_grammar(std::string grammar_name, const std::vector<std::string>& phrases) {
  std::vector<Expr> branches;
  for (const auto& phrase : phrases) {
    std::istringstream words(lowercase(phrase));
    std::vector<Expr> tokens;
    std::string word;
    while (words >> word) tokens.push_back(Expr::token(word));
    if (tokens.empty()) throw Error(ErrorCode::kInvalidArgument, "empty phrase");
    branches.push_back(tokens.size() == 1 ? std::move(tokens.front())
                                          : Expr::sequence(std::move(tokens)));
  }
  if (branches.empty()) throw Error(ErrorCode::kInvalidArgument, "no phrases");
  GrammarAst ast;
  ast.name = grammar_name;
  ast.rules.emplace(grammar_name, branches.size() == 1 ? std::move(branches.front())
                                                       : Expr::alternation(std::move(branches)));
  ast.public_rules.insert(std::move(grammar_name));
  return ast;
}

}  // namespace robospeech::grammar
