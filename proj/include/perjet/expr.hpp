#ifndef PERJET_EXPR_HPP
#define PERJET_EXPR_HPP

#include <cctype>
#include <string>
#include <vector>

#include "rational_function.hpp"

namespace perjet {

/// Recursive-descent parser for polynomial and rational-function expressions
/// in named variables, with `^ * + -` and a single top-level fraction:
///   expr   := poly ('/' poly)?
///   poly   := term (('+'|'-') term)*
///   term   := factor ('*' factor)*
///   factor := '-' factor | base ('^' nat)?
///   base   := '(' poly ')' | name | integer
template <class K>
class ExprParser {
public:
  ExprParser(std::string text, std::vector<std::string> vars, const CoefficientField& field)
      : text_(std::move(text)), vars_(std::move(vars)), field_(field) {}

  RationalFunction<K> parse_rational() {
    Polynomial<K> num = parse_poly();
    skip_ws();
    if (peek() == '/') {
      ++pos_;
      Polynomial<K> den = parse_poly();
      skip_ws();
      if (pos_ != text_.size()) error("trailing input after the top-level fraction");
      if (den.is_zero_poly()) error("zero denominator");
      return RationalFunction<K>(num, den);
    }
    if (pos_ != text_.size()) error("unexpected character '" + std::string(1, peek()) + "'");
    return RationalFunction<K>::from_polynomial(num);
  }

  Polynomial<K> parse_polynomial() {
    Polynomial<K> p = parse_poly();
    skip_ws();
    if (pos_ != text_.size()) error("unexpected character '" + std::string(1, peek()) + "'");
    return p;
  }

private:
  std::string text_;
  std::vector<std::string> vars_;
  CoefficientField field_;
  std::size_t pos_ = 0;

  [[noreturn]] void error(const std::string& msg) {
    fail(Errc::ParseError, msg + " at column " + std::to_string(pos_ + 1) + " of '" + text_ + "'");
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  unsigned nvars() const { return static_cast<unsigned>(vars_.size()); }

  Polynomial<K> parse_poly() {
    skip_ws();
    bool negate = false;
    if (peek() == '-') {
      negate = true;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    Polynomial<K> acc = parse_term();
    if (negate) acc = -acc;
    while (true) {
      skip_ws();
      char c = peek();
      if (c == '+') {
        ++pos_;
        acc += parse_term();
      } else if (c == '-') {
        ++pos_;
        acc -= parse_term();
      } else {
        return acc;
      }
    }
  }

  Polynomial<K> parse_term() {
    Polynomial<K> acc = parse_factor();
    while (true) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc *= parse_factor();
      } else {
        return acc;
      }
    }
  }

  Polynomial<K> parse_factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -parse_factor();
    }
    Polynomial<K> base = parse_base();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
      if (digits.empty()) error("expected an exponent");
      unsigned long e = std::stoul(digits);
      Polynomial<K> acc = Polynomial<K>::constant(nvars(), ScalarOps<K>::one());
      for (unsigned long i = 0; i < e; ++i) acc *= base;
      return acc;
    }
    return base;
  }

  Polynomial<K> parse_base() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      Polynomial<K> inner = parse_poly();
      skip_ws();
      if (peek() != ')') error("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
      return Polynomial<K>::constant(nvars(), scalar_from_digits(digits));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') name += text_[pos_++];
      for (unsigned v = 0; v < nvars(); ++v)
        if (vars_[v] == name) return Polynomial<K>::variable(nvars(), v);
      error("unknown variable '" + name + "'");
    }
    error(c == '\0' ? std::string("unexpected end of input") : "unexpected character '" + std::string(1, c) + "'");
  }

  K scalar_from_digits(const std::string& digits);
};

template <>
inline Rat ExprParser<Rat>::scalar_from_digits(const std::string& digits) {
  return rat_from_string(digits);
}

template <>
inline Fp ExprParser<Fp>::scalar_from_digits(const std::string& digits) {
  Int n(digits);
  Int r = n % Int(static_cast<unsigned long>(field_.p));
  return Fp(r.get_si(), field_.p);
}

template <class K>
RationalFunction<K> parse_rational_function(const std::string& text, const std::vector<std::string>& vars,
                                            const CoefficientField& field) {
  return ExprParser<K>(text, vars, field).parse_rational();
}

template <class K>
Polynomial<K> parse_polynomial_expr(const std::string& text, const std::vector<std::string>& vars,
                                    const CoefficientField& field) {
  return ExprParser<K>(text, vars, field).parse_polynomial();
}

} // namespace perjet

#endif
