#pragma once

#include "bianchi/expr.hpp"

#include <cctype>
#include <map>
#include <stdexcept>
#include <string>

namespace bianchi {

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string &msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)),
        position(pos) {}
};

namespace detail {

class Parser {
public:
  explicit Parser(const std::string &text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size())
      fail("unexpected trailing input '" + text_.substr(pos_) + "'");
    return e;
  }

private:
  // sum := product (('+'|'-') product)*
  Expr parse_sum() {
    std::vector<Expr> parts;
    parts.push_back(parse_product());
    while (true) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        parts.push_back(parse_product());
      } else if (peek() == '-') {
        ++pos_;
        parts.push_back(-parse_product());
      } else {
        break;
      }
    }
    return Expr::sum(std::move(parts));
  }

  // product := unary (('*'|'/') unary)*
  Expr parse_product() {
    Expr acc = parse_unary();
    while (true) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc = acc * parse_unary();
      } else if (peek() == '/') {
        ++pos_;
        acc = acc * Expr::pow(parse_unary(), -1);
      } else {
        break;
      }
    }
    return acc;
  }

  Expr parse_unary() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -parse_unary();
    }
    return parse_power();
  }

  // power := primary ('^' exponent)?
  Expr parse_power() {
    Expr base = parse_primary();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      return Expr::pow(std::move(base), parse_exponent());
    }
    return base;
  }

  int parse_exponent() {
    skip_ws();
    bool parens = false;
    if (peek() == '(') {
      parens = true;
      ++pos_;
      skip_ws();
    }
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    }
    skip_ws();
    if (!std::isdigit(static_cast<unsigned char>(peek())))
      fail("expected integer exponent");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      if (v > 1000000)
        fail("exponent out of range");
      ++pos_;
    }
    if (parens) {
      skip_ws();
      expect(')');
    }
    return static_cast<int>(neg ? -v : v);
  }

  Expr parse_primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      skip_ws();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)))
      return parse_symbol();
    fail(c == '\0' ? std::string("unexpected end of input")
                   : "unexpected character '" + std::string(1, c) + "'");
    return Expr(0);
  }

  Expr parse_number() {
    Integer v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (peek() - '0');
      ++pos_;
    }
    return Expr(Rational(v));
  }

  Expr parse_symbol() {
    const size_t start = pos_;
    std::string word;
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
      word += peek();
      ++pos_;
    }
    int primes = 0;
    while (peek() == '\'') {
      ++primes;
      ++pos_;
    }

    // Metric functions: A, B, C with optional primes and optional "(t)".
    if (word.size() == 1 && word[0] >= 'A' && word[0] <= 'C') {
      if (peek() == '(') {
        const size_t save = pos_;
        ++pos_;
        skip_ws();
        if (peek() == 't') {
          ++pos_;
          skip_ws();
          expect(')');
        } else {
          pos_ = save;
          fail("expected '(t)' after metric function name");
        }
      }
      return Expr(Atom::metric_fn(word[0] - 'A', primes));
    }
    if (primes != 0)
      fail("primes are only valid on metric function names", start);

    static const std::map<std::string, Atom> fixed = [] {
      std::map<std::string, Atom> m;
      for (int c = 0; c < kNumCoords; ++c)
        m.emplace(Atom::coordinate(c).name(), Atom::coordinate(c));
      for (int c = kT; c <= kZ; ++c) {
        m.emplace(Atom::velocity(c).name(), Atom::velocity(c));
        m.emplace(Atom::acceleration(c).name(), Atom::acceleration(c));
      }
      for (int i = 0; i < kNumParameters; ++i)
        m.emplace(Atom::parameter(i).name(), Atom::parameter(i));
      for (int u = 0; u < kNumUnknowns; ++u)
        m.emplace(Atom::unknown_fn(u).name(), Atom::unknown_fn(u));
      return m;
    }();

    auto it = fixed.find(word);
    if (it != fixed.end())
      return Expr(it->second);

    // Partials of the unknown functions: mu_s, tau_x, f_st, ...
    const size_t us = word.find('_');
    if (us != std::string::npos) {
      const std::string head = word.substr(0, us);
      const std::string tail = word.substr(us + 1);
      auto hit = fixed.find(head);
      if (hit != fixed.end() && hit->second.is_unknown_fn() && !tail.empty()) {
        std::array<uint8_t, 5> counts{};
        static const std::string letters = "stxyz";
        bool ok = true;
        for (char ch : tail) {
          const size_t idx = letters.find(ch);
          if (idx == std::string::npos) {
            ok = false;
            break;
          }
          ++counts[idx];
        }
        if (ok)
          return Expr(Atom::unknown_fn(hit->second.index(), counts));
      }
    }
    fail("unknown symbol '" + word + "'", start);
    return Expr(0);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }
  void expect(char c) {
    if (peek() != c)
      fail("expected '" + std::string(1, c) + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string &msg) const { fail(msg, pos_); }
  [[noreturn]] void fail(const std::string &msg, size_t pos) const {
    throw ParseError(msg, pos);
  }

  const std::string &text_;
  size_t pos_ = 0;
};

} // namespace detail

/// Parses the expression grammar shared by the library, its rule tables and
/// the command-line tool. Throws ParseError with an offset on bad input.
inline Expr parse_expr(const std::string &text) {
  return detail::Parser(text).parse();
}

} // namespace bianchi
