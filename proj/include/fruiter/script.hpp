#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "fruiter/core.hpp"
#include "fruiter/errors.hpp"

namespace fruiter {

// ---------------------------------------------------------------------------
// Script mini-language front end
//
//   file      := (line NEWLINE)*
//   line      := comment | assign | invoke | empty
//   comment   := "#" any-text
//   assign    := "let" IDENT "=" finder
//   finder    := ("findElementById" | "findElementByXPath") "(" STRING ")"
//   invoke    := (IDENT | finder) "." action
//   action    := "click" "()" | "sendKeys" "(" STRING ")"
//              | "longPress" "()" | "swipe" "(" STRING ")"
//
// STRING is double-quoted with \" and \\ escapes. The parser keeps API names
// as plain identifiers; classifying them as finders or actions is the job of
// the ApiSignatureTable at extraction time, which is what lets one swap in a
// different testing framework's signatures.
// ---------------------------------------------------------------------------

enum class LocatorKind { id, xpath };

inline const char* locator_kind_name(LocatorKind k) {
  return k == LocatorKind::id ? "id" : "xpath";
}

inline std::optional<LocatorKind> locator_kind_from_name(std::string_view s) {
  if (s == "id") return LocatorKind::id;
  if (s == "xpath") return LocatorKind::xpath;
  return std::nullopt;
}

// The customization point for different testing frameworks: which API names
// locate elements, which perform actions, and which actions carry input.
struct ApiSignatureTable {
  std::map<std::string, LocatorKind> finder_apis;
  std::map<std::string, Action> action_apis;
  std::set<std::string> input_bearing;

  // Finder and action name sets must be disjoint.
  std::vector<std::string> check() const {
    std::vector<std::string> problems;
    for (const auto& [name, kind] : finder_apis)
      if (action_apis.count(name))
        problems.push_back("API '" + name + "' is both a finder and an action");
    for (const auto& name : input_bearing)
      if (!action_apis.count(name))
        problems.push_back("input-bearing API '" + name + "' is not an action");
    return problems;
  }
};

// Appium-style defaults matching the script grammar verbatim. swipe takes a
// direction string in the grammar, but only sendKeys contributes an event
// input value; the direction argument is not retained in the uniform
// representation.
inline ApiSignatureTable default_signature_table() {
  ApiSignatureTable t;
  t.finder_apis = {{"findElementById", LocatorKind::id},
                   {"findElementByXPath", LocatorKind::xpath}};
  t.action_apis = {{"click", Action::click},
                   {"sendKeys", Action::send_keys},
                   {"longPress", Action::long_press},
                   {"swipe", Action::swipe}};
  t.input_bearing = {"sendKeys"};
  return t;
}

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct FinderCall {
  std::string api;      // e.g. findElementById
  std::string literal;  // the locator string
  int line = 0;
  int col = 0;
};

struct AssignStmt {
  std::string var;
  FinderCall finder;
  int line = 0;
};

struct InvokeStmt {
  std::variant<std::string, FinderCall> receiver;  // variable or inline finder
  std::string action_api;
  std::optional<std::string> arg;
  int line = 0;
  int col = 0;
};

using Statement = std::variant<AssignStmt, InvokeStmt>;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace detail {

enum class TokKind { ident, string, lparen, rparen, dot, equals, end };

struct Token {
  TokKind kind;
  std::string text;
  int line;
  int col;
};

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) {
  return ident_start(c) || (c >= '0' && c <= '9');
}

// Tokenizes one line. Full-line comments were filtered out by the caller.
inline std::vector<Token> lex_line(const std::string& text, int line_no) {
  std::vector<Token> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    int col = static_cast<int>(i) + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      toks.push_back({TokKind::ident, text.substr(i, j - i), line_no, col});
      i = j;
      continue;
    }
    if (c == '"') {
      std::string value;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < text.size()) {
        char d = text[j];
        if (d == '\\') {
          if (j + 1 >= text.size())
            throw ParseError(line_no, static_cast<int>(j) + 1,
                             "dangling escape in string literal");
          char e = text[j + 1];
          if (e != '"' && e != '\\')
            throw ParseError(line_no, static_cast<int>(j) + 1,
                             std::string("invalid escape '\\") + e + "'");
          value.push_back(e);
          j += 2;
          continue;
        }
        if (d == '"') {
          closed = true;
          ++j;
          break;
        }
        value.push_back(d);
        ++j;
      }
      if (!closed)
        throw ParseError(line_no, col, "unterminated string literal");
      toks.push_back({TokKind::string, value, line_no, col});
      i = j;
      continue;
    }
    if (c == '(') {
      toks.push_back({TokKind::lparen, "(", line_no, col});
      ++i;
      continue;
    }
    if (c == ')') {
      toks.push_back({TokKind::rparen, ")", line_no, col});
      ++i;
      continue;
    }
    if (c == '.') {
      toks.push_back({TokKind::dot, ".", line_no, col});
      ++i;
      continue;
    }
    if (c == '=') {
      toks.push_back({TokKind::equals, "=", line_no, col});
      ++i;
      continue;
    }
    throw ParseError(line_no, col,
                     std::string("unexpected character '") + c + "'");
  }
  toks.push_back({TokKind::end, "", line_no, static_cast<int>(text.size()) + 1});
  return toks;
}

class LineParser {
public:
  explicit LineParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ + 1 < toks_.size() ? pos_++ : pos_]; }

  Token expect(TokKind kind, const char* what) {
    const Token& t = peek();
    if (t.kind != kind)
      throw ParseError(t.line, t.col,
                       std::string("expected ") + what + describe(t));
    return next();
  }

  void expect_end() {
    const Token& t = peek();
    if (t.kind != TokKind::end)
      throw ParseError(t.line, t.col,
                       "unexpected trailing input" + describe(t));
  }

  // call := IDENT "(" [STRING] ")"
  // Returns (api, optional arg).
  std::pair<FinderCall, std::optional<std::string>> parse_call() {
    Token name = expect(TokKind::ident, "an API name");
    expect(TokKind::lparen, "'('");
    std::optional<std::string> arg;
    if (peek().kind == TokKind::string) arg = next().text;
    expect(TokKind::rparen, "')'");
    FinderCall call{name.text, arg.value_or(""), name.line, name.col};
    return {call, arg};
  }

private:
  static std::string describe(const Token& t) {
    if (t.kind == TokKind::end) return " before end of line";
    if (t.kind == TokKind::string) return ", got string literal";
    return ", got '" + t.text + "'";
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// parse_script: script text -> ordered statement list
// ---------------------------------------------------------------------------

inline std::vector<Statement> parse_script(const std::string& text) {
  std::vector<Statement> statements;
  std::size_t start = 0;
  int line_no = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string line = nl == std::string::npos
                           ? text.substr(start)
                           : text.substr(start, nl - start);
    ++line_no;
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;

    std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;      // blank
    if (line[first] == '#') continue;              // comment

    detail::LineParser p(detail::lex_line(line, line_no));

    if (p.peek().kind == detail::TokKind::ident && p.peek().text == "let") {
      p.next();
      detail::Token var = p.expect(detail::TokKind::ident, "a variable name");
      p.expect(detail::TokKind::equals, "'='");
      auto [finder, arg] = p.parse_call();
      if (!arg)
        throw ParseError(finder.line, finder.col,
                         "finder call requires a string argument");
      p.expect_end();
      statements.push_back(AssignStmt{var.text, finder, var.line});
      continue;
    }

    // invoke := (IDENT | call) "." IDENT "(" [STRING] ")"
    detail::Token head = p.expect(detail::TokKind::ident, "a statement");
    std::variant<std::string, FinderCall> receiver;
    if (p.peek().kind == detail::TokKind::lparen) {
      p.expect(detail::TokKind::lparen, "'('");
      std::optional<std::string> arg;
      if (p.peek().kind == detail::TokKind::string)
        arg = p.next().text;
      p.expect(detail::TokKind::rparen, "')'");
      if (!arg)
        throw ParseError(head.line, head.col,
                         "finder call requires a string argument");
      receiver = FinderCall{head.text, *arg, head.line, head.col};
    } else {
      receiver = head.text;
    }
    p.expect(detail::TokKind::dot, "'.'");
    auto [action_call, action_arg] = p.parse_call();
    p.expect_end();
    statements.push_back(InvokeStmt{std::move(receiver), action_call.api,
                                    action_arg, head.line, head.col});
  }
  return statements;
}

// ---------------------------------------------------------------------------
// extract_events: statements + signature table -> GUI event sequence
//
// One event per action invocation, in program order. A variable receiver
// resolves to its most recent preceding assignment (straight-line,
// last-definition-wins reaching definitions).
// ---------------------------------------------------------------------------

inline std::vector<GuiEvent> extract_events(
    const std::vector<Statement>& statements,
    const ApiSignatureTable& table = default_signature_table()) {
  std::vector<GuiEvent> events;
  std::map<std::string, FinderCall> defs;

  auto resolve_finder = [&table](const FinderCall& call) -> const FinderCall& {
    if (!table.finder_apis.count(call.api))
      throw ExtractError(call.line, "unknown finder API '" + call.api + "'");
    if (call.literal.empty())
      throw ExtractError(call.line, "locator must be non-empty");
    return call;
  };

  for (const auto& stmt : statements) {
    if (const auto* assign = std::get_if<AssignStmt>(&stmt)) {
      resolve_finder(assign->finder);
      defs.insert_or_assign(assign->var, assign->finder);
      continue;
    }
    const auto& invoke = std::get<InvokeStmt>(stmt);

    const FinderCall* finder = nullptr;
    if (const auto* var = std::get_if<std::string>(&invoke.receiver)) {
      auto it = defs.find(*var);
      if (it == defs.end())
        throw ExtractError(invoke.line, "use of variable '" + *var +
                                            "' with no prior assignment");
      finder = &it->second;
    } else {
      finder = &resolve_finder(std::get<FinderCall>(invoke.receiver));
    }

    auto action_it = table.action_apis.find(invoke.action_api);
    if (action_it == table.action_apis.end())
      throw ExtractError(invoke.line,
                         "unknown action API '" + invoke.action_api + "'");

    GuiEvent event;
    event.locator = finder->literal;
    event.action = action_it->second;
    if (table.input_bearing.count(invoke.action_api)) {
      if (!invoke.arg)
        throw ExtractError(invoke.line, "action '" + invoke.action_api +
                                            "' requires an input argument");
      event.input = invoke.arg;
    }
    events.push_back(std::move(event));
  }
  return events;
}

inline std::vector<GuiEvent> extract_events_from_source(
    const std::string& text,
    const ApiSignatureTable& table = default_signature_table()) {
  return extract_events(parse_script(text), table);
}

}  // namespace fruiter
