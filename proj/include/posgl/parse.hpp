#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "posgl/formula.hpp"

// Concrete grammar (tightest first):
//
//   unary  ::= ('box' | 'dia') power? unary | '~' unary | atom
//   conj   ::= unary  ('/\' unary)*                 left assoc
//   disj   ::= conj   ('\/' conj)*                  left assoc
//   impl   ::= disj   ('->' impl)?                  right assoc
//   atom   ::= 'top' | 'bot' | ident | '(' impl ')'
//   power  ::= '^{' ('n' ('+' nat)? | nat) '}'
//   sequent ::= impl '|-' impl
//
// Positive mode rejects '~' and '->'; symbolic exponents ('n') are only
// accepted in schematic mode. A constant power box^{k} is plain sugar and
// expands to k nested modalities in any mode.

namespace posgl {

struct ParseError : std::runtime_error {
  std::size_t offset;
  ParseError(const std::string& msg, std::size_t off)
      : std::runtime_error(msg + " (at byte " + std::to_string(off) + ")"), offset(off) {}
};

enum class ParseMode { Positive, Full, Schematic };

namespace detail {

class Parser {
 public:
  Parser(std::string_view text, ParseMode mode) : text_(text), mode_(mode) {}

  Formula formula() {
    Formula f = impl();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

  Sequent sequent() {
    Formula l = impl();
    skip_ws();
    if (!eat("|-")) fail("expected '|-'");
    Formula r = impl();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return {l, r};
  }

 private:
  Formula impl() {
    Formula l = disj();
    skip_ws();
    if (peek("->")) {
      if (mode_ == ParseMode::Positive || mode_ == ParseMode::Schematic)
        fail("negation/implication not allowed in positive formula");
      eat("->");
      return Formula::implies(l, impl());
    }
    return l;
  }

  Formula disj() {
    Formula l = conj();
    for (;;) {
      skip_ws();
      if (!peek("\\/")) return l;
      eat("\\/");
      l = Formula::disj(l, conj());
    }
  }

  Formula conj() {
    Formula l = unary();
    for (;;) {
      skip_ws();
      if (!peek("/\\")) return l;
      eat("/\\");
      l = Formula::conj(l, unary());
    }
  }

  Formula unary() {
    skip_ws();
    if (peek("~")) {
      std::size_t at = pos_;
      eat("~");
      if (mode_ != ParseMode::Full) {
        pos_ = at;
        fail("negation/implication not allowed in positive formula");
      }
      return Formula::negation(unary());
    }
    std::size_t at = pos_;
    std::string id = try_ident();
    if (id == "box" || id == "dia") {
      Mod m = id == "box" ? Mod::Box : Mod::Dia;
      skip_ws();
      if (peek("^")) return power(m);
      return Formula::modal(m, unary());
    }
    pos_ = at;
    return atom();
  }

  Formula power(Mod m) {
    eat("^");
    if (!eat("{")) fail("expected '{' after '^'");
    skip_ws();
    bool symbolic = false;
    unsigned c = 0;
    if (peek("n") && !std::isalnum(static_cast<unsigned char>(look(1))) && look(1) != '_') {
      if (mode_ != ParseMode::Schematic)
        fail("symbolic exponent only allowed in schematic formulas");
      symbolic = true;
      eat("n");
      skip_ws();
      if (peek("+")) {
        eat("+");
        c = number();
      }
    } else {
      c = number();
    }
    skip_ws();
    if (!eat("}")) fail("expected '}' closing exponent");
    Formula sub = unary();
    return symbolic ? Formula::iter(m, c, sub) : iterate(m, c, sub);
  }

  Formula atom() {
    skip_ws();
    if (eat("(")) {
      Formula f = impl();
      skip_ws();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    std::string id = try_ident();
    if (id.empty()) fail("expected formula");
    if (id == "top") return Formula::top();
    if (id == "bot") return Formula::bot();
    if (id == "box" || id == "dia") fail("modality needs an argument");
    return Formula::var(id);
  }

  unsigned number() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      fail("expected number");
    unsigned v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(text_[pos_] - '0');
      if (v > 1000000) fail("exponent too large");
      ++pos_;
    }
    return v;
  }

  std::string try_ident() {
    skip_ws();
    std::size_t s = pos_;
    if (s < text_.size() &&
        (std::isalpha(static_cast<unsigned char>(text_[s])) || text_[s] == '_')) {
      std::size_t e = s + 1;
      while (e < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[e])) ||
                                  text_[e] == '_' || text_[e] == '\''))
        ++e;
      pos_ = e;
      return std::string(text_.substr(s, e - s));
    }
    return {};
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  char look(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  bool peek(std::string_view tok) const { return text_.substr(pos_, tok.size()) == tok; }
  bool eat(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  std::string_view text_;
  ParseMode mode_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Formula parse_positive(std::string_view text) {
  return detail::Parser(text, ParseMode::Positive).formula();
}
inline Formula parse_full(std::string_view text) {
  return detail::Parser(text, ParseMode::Full).formula();
}
inline Formula parse_schematic(std::string_view text) {
  return detail::Parser(text, ParseMode::Schematic).formula();
}
inline Sequent parse_sequent(std::string_view text) {
  return detail::Parser(text, ParseMode::Positive).sequent();
}
inline Sequent parse_schematic_sequent(std::string_view text) {
  return detail::Parser(text, ParseMode::Schematic).sequent();
}

}  // namespace posgl
