#pragma once

// Text grammar for formulas.
//
//   iff     := implies ( "<->" implies )*          left-assoc
//   implies := until ( "->" implies )?             right-assoc
//   until   := or ( "U" until )?                   right-assoc
//   or      := and ( "|" and )*
//   and     := prefix ( "&" prefix )*
//   prefix  := ("!" | "X" | "WX" | "G" | "F" | "Front" | "Back" | "Left" | "Right"
//               | "@" name | "↓" name | "down" name
//               | "<" dir [":" int] ">" | "[" dir [":" int] "]") prefix
//            | atom
//   atom    := "1" | "0" | name | "(" iff ")"
//
// Names are [A-Za-z_][A-Za-z0-9_]*. Every name must be a declared proposition,
// a declared nominal, or introduced by some binder in the same formula.
// Names starting with "__" are reserved for generated binders.

#include "hstl/error.hpp"
#include "hstl/formula.hpp"

#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hstl {

inline constexpr std::string_view kReservedPrefix = "__";

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view kKeywords[] = {"X",    "WX",    "U",    "G",    "F",
                                                   "Front", "Back", "Left", "Right", "down"};
  for (auto k : kKeywords) {
    if (k == s) return true;
  }
  return false;
}

namespace detail {

enum class Tok {
  End,
  Name,
  Int,
  Not,
  And,
  Or,
  Implies,
  Iff,
  LParen,
  RParen,
  LAngle,
  RAngle,
  LBracket,
  RBracket,
  Colon,
  At,
  Down,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
};

inline std::vector<Token> tokenize(std::string_view s) {
  static constexpr std::string_view kDownArrow = "\xE2\x86\x93";
  std::vector<Token> out;
  std::size_t i = 0;
  auto is_ident_start = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  auto is_ident = [](unsigned char c) { return std::isalnum(c) || c == '_'; };
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto push = [&](Tok kind, std::size_t len) {
      out.push_back({kind, std::string(s.substr(start, len)), start});
      i = start + len;
    };
    if (s.substr(i, 3) == "<->") {
      push(Tok::Iff, 3);
    } else if (s.substr(i, 2) == "->") {
      push(Tok::Implies, 2);
    } else if (s.substr(i, kDownArrow.size()) == kDownArrow) {
      push(Tok::Down, kDownArrow.size());
    } else if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && is_ident(static_cast<unsigned char>(s[j]))) ++j;
      push(s.substr(i, j - i) == "down" ? Tok::Down : Tok::Name, j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      push(Tok::Int, j - i);
    } else {
      switch (c) {
        case '!': push(Tok::Not, 1); break;
        case '&': push(Tok::And, 1); break;
        case '|': push(Tok::Or, 1); break;
        case '(': push(Tok::LParen, 1); break;
        case ')': push(Tok::RParen, 1); break;
        case '<': push(Tok::LAngle, 1); break;
        case '>': push(Tok::RAngle, 1); break;
        case '[': push(Tok::LBracket, 1); break;
        case ']': push(Tok::RBracket, 1); break;
        case ':': push(Tok::Colon, 1); break;
        case '@': push(Tok::At, 1); break;
        default: throw ParseError("unexpected character '" + std::string(1, s[i]) + "'", i);
      }
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::set<std::string>& props,
         const std::set<std::string>& noms, std::set<std::string> binders)
      : toks_(std::move(tokens)), props_(props), noms_(noms), binders_(std::move(binders)) {}

  Formula parse() {
    Formula f = iff();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  bool peek_name(std::string_view n) const { return peek().kind == Tok::Name && peek().text == n; }
  Token take() { return toks_[pos_++]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().offset); }

  void expect(Tok kind, const char* what) {
    if (peek().kind != kind) {
      fail(std::string("expected ") + what + (peek().kind == Tok::End ? " before end of input" : ", got '" + peek().text + "'"));
    }
    ++pos_;
  }

  Formula iff() {
    Formula lhs = implies();
    while (peek().kind == Tok::Iff) {
      ++pos_;
      lhs = Formula::iff(lhs, implies());
    }
    return lhs;
  }

  Formula implies() {
    Formula lhs = until();
    if (peek().kind == Tok::Implies) {
      ++pos_;
      return Formula::implies(lhs, implies());
    }
    return lhs;
  }

  Formula until() {
    Formula lhs = disj();
    if (peek_name("U")) {
      ++pos_;
      return Formula::until(lhs, until());
    }
    return lhs;
  }

  Formula disj() {
    Formula lhs = conj();
    while (peek().kind == Tok::Or) {
      ++pos_;
      lhs = Formula::disj(lhs, conj());
    }
    return lhs;
  }

  Formula conj() {
    Formula lhs = prefix();
    while (peek().kind == Tok::And) {
      ++pos_;
      lhs = Formula::conj(lhs, prefix());
    }
    return lhs;
  }

  std::string nominal_operand(const char* op) {
    if (peek().kind != Tok::Name || is_keyword(peek().text)) {
      fail(std::string("expected a nominal after ") + op);
    }
    const Token t = take();
    if (!noms_.contains(t.text) && !binders_.contains(t.text)) {
      throw ParseError("'" + t.text + "' is not a nominal", t.offset);
    }
    return t.text;
  }

  Formula bounded(Op op) {
    ++pos_;
    if (peek().kind != Tok::Name) fail("expected a direction");
    auto d = direction_from_string(peek().text);
    if (!d) fail("expected a direction, got '" + peek().text + "'");
    ++pos_;
    std::optional<int> bound;
    if (peek().kind == Tok::Colon) {
      ++pos_;
      if (peek().kind != Tok::Int) fail("expected a bound");
      bound = std::stoi(take().text);
    }
    expect(op == Op::SomeDir ? Tok::RAngle : Tok::RBracket, op == Op::SomeDir ? "'>'" : "']'");
    Formula body = prefix();
    return op == Op::SomeDir ? Formula::some_dir(*d, bound, body) : Formula::all_dir(*d, bound, body);
  }

  Formula prefix() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not: ++pos_; return Formula::negate(prefix());
      case Tok::At: {
        ++pos_;
        std::string v = nominal_operand("'@'");
        return Formula::at(std::move(v), prefix());
      }
      case Tok::Down: {
        ++pos_;
        std::string v = nominal_operand("a binder");
        return Formula::bind(std::move(v), prefix());
      }
      case Tok::LAngle: return bounded(Op::SomeDir);
      case Tok::LBracket: return bounded(Op::AllDir);
      case Tok::Name: {
        if (t.text == "X") { ++pos_; return Formula::next(prefix()); }
        if (t.text == "WX") { ++pos_; return Formula::weak_next(prefix()); }
        if (t.text == "G") { ++pos_; return Formula::globally(prefix()); }
        if (t.text == "F") { ++pos_; return Formula::eventually(prefix()); }
        if (auto d = direction_from_string(t.text)) { ++pos_; return Formula::move(*d, prefix()); }
        return atom();
      }
      default: return atom();
    }
  }

  Formula atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Int:
        ++pos_;
        if (t.text == "1") return Formula::top();
        if (t.text == "0") return Formula::bottom();
        throw ParseError("only 0 and 1 are constants, got '" + t.text + "'", t.offset);
      case Tok::LParen: {
        ++pos_;
        Formula f = iff();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Name: {
        if (is_keyword(t.text)) fail("unexpected keyword '" + t.text + "'");
        ++pos_;
        if (props_.contains(t.text)) return Formula::prop(t.text);
        if (noms_.contains(t.text) || binders_.contains(t.text)) return Formula::nom(t.text);
        throw ParseError("undeclared identifier '" + t.text + "'", t.offset);
      }
      case Tok::End: fail("unexpected end of input");
      default: fail("unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::set<std::string>& props_;
  const std::set<std::string>& noms_;
  std::set<std::string> binders_;
};

inline void check_declared_name(const std::string& name) {
  if (name.empty()) throw ValidationError("empty symbol name");
  const auto c0 = static_cast<unsigned char>(name[0]);
  if (!(std::isalpha(c0) || c0 == '_')) throw ValidationError("invalid symbol name '" + name + "'");
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
      throw ValidationError("invalid symbol name '" + name + "'");
    }
  }
  if (is_keyword(name)) throw ValidationError("'" + name + "' is a reserved keyword");
  if (name.starts_with(kReservedPrefix)) {
    throw ValidationError("'" + name + "' uses the reserved prefix " + std::string(kReservedPrefix));
  }
}

}  // namespace detail

/// Parses `text` against declared propositions and nominals. Names introduced
/// by a binder anywhere in the formula count as nominals for the whole text.
inline Formula parse(std::string_view text, const std::set<std::string>& props,
                     const std::set<std::string>& noms) {
  for (const auto& p : props) {
    detail::check_declared_name(p);
    if (noms.contains(p)) throw ValidationError("'" + p + "' declared as both proposition and nominal");
  }
  for (const auto& n : noms) detail::check_declared_name(n);

  auto tokens = detail::tokenize(text);
  std::set<std::string> binders;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i].kind != detail::Tok::Down) continue;
    const auto& name = tokens[i + 1];
    if (name.kind != detail::Tok::Name || is_keyword(name.text)) continue;  // reported by the parser
    if (props.contains(name.text)) {
      throw ParseError("proposition '" + name.text + "' used as a binder", name.offset);
    }
    binders.insert(name.text);
  }
  return detail::Parser(std::move(tokens), props, noms, std::move(binders)).parse();
}

inline Formula parse(std::string_view text, const std::vector<std::string>& props,
                     const std::vector<std::string>& noms) {
  return parse(text, std::set<std::string>(props.begin(), props.end()),
               std::set<std::string>(noms.begin(), noms.end()));
}

inline Formula parse(std::string_view text, std::initializer_list<std::string> props,
                     std::initializer_list<std::string> noms) {
  return parse(text, std::set<std::string>(props), std::set<std::string>(noms));
}

}  // namespace hstl
