#pragma once

// Polynomial text syntax shared by the problem files and all printed output:
//
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := unary ('*' unary)*
//   unary  := '-' unary | power
//   power  := atom ['^' integer]
//   atom   := integer | identifier | '(' expr ')'
//
// Identifiers are looked up by name in the ring; whitespace is ignored.

#include "dlocus/poly.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dlocus {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line, int column)
      : std::runtime_error(what + " at line " + std::to_string(line) + ", column " + std::to_string(column)),
        line_(line), column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

namespace detail {

template <class Field>
class PolyParser {
 public:
  using Poly = Polynomial<Field>;

  PolyParser(RingPtr<Field> ring, std::string_view text, int line, int column)
      : ring_(std::move(ring)), text_(text), line_(line), column_(column) {}

  Poly parse_all() {
    skip_ws();
    if (pos_ == text_.size()) fail("expected a polynomial");
    auto p = expr();
    skip_ws();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return p;
  }

 private:
  Poly expr() {
    skip_ws();
    bool negate = false;
    if (peek() == '+' || peek() == '-') negate = text_[pos_++] == '-';
    auto acc = term();
    if (negate) acc = -acc;
    while (true) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return acc;
      ++pos_;
      auto rhs = term();
      acc = c == '+' ? acc + rhs : acc - rhs;
    }
  }

  Poly term() {
    auto acc = unary();
    while (true) {
      skip_ws();
      if (peek() != '*') return acc;
      ++pos_;
      acc = acc * unary();
    }
  }

  Poly unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -unary();
    }
    return power();
  }

  Poly power() {
    auto base = atom();
    skip_ws();
    if (peek() != '^') return base;
    ++pos_;
    skip_ws();
    auto start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected an exponent");
    if (pos_ - start > 3) fail("exponent too large");
    return base.pow(static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
  }

  Poly atom() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return Poly::constant(ring_, ring_->field().from_decimal(text_.substr(start, pos_ - start)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      auto start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      int idx = ring_->index_of(name);
      if (idx < 0) {
        pos_ = start;
        fail("unknown variable '" + name + "'");
      }
      return Poly::variable(ring_, idx);
    }
    if (pos_ == text_.size()) fail("unexpected end of input");
    fail(std::string("unexpected '") + c + "'");
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, line_, column_ + static_cast<int>(pos_));
  }

  RingPtr<Field> ring_;
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_, column_;
};

}  // namespace detail

/// Parses one polynomial. `line`/`column` locate `text` inside a larger
/// document for error messages (1-based).
template <class Field>
Polynomial<Field> parse_polynomial(const RingPtr<Field>& ring, std::string_view text, int line = 1, int column = 1) {
  return detail::PolyParser<Field>(ring, text, line, column).parse_all();
}

/// Splits on commas that are not nested inside parentheses.
inline std::vector<std::pair<std::string_view, std::size_t>> split_top_level(std::string_view text, char sep = ',') {
  std::vector<std::pair<std::string_view, std::size_t>> parts;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '(') ++depth;
    else if (text[i] == ')') --depth;
    else if (text[i] == sep && depth == 0) {
      parts.emplace_back(text.substr(start, i - start), start);
      start = i + 1;
    }
  }
  parts.emplace_back(text.substr(start), start);
  return parts;
}

/// Comma-separated list of polynomials.
template <class Field>
std::vector<Polynomial<Field>> parse_polynomial_list(const RingPtr<Field>& ring, std::string_view text, int line = 1,
                                                     int column = 1) {
  std::vector<Polynomial<Field>> out;
  for (auto [part, offset] : split_top_level(text))
    out.push_back(parse_polynomial(ring, part, line, column + static_cast<int>(offset)));
  return out;
}

}  // namespace dlocus
