#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>

#include "affalg/expr.hpp"

namespace affalg {

namespace {

struct Parser {
  std::string_view text;
  const Chart& chart;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c))
      throw ParseError(std::string("expected '") + c + "' at offset " + std::to_string(pos), pos);
  }

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at offset " + std::to_string(pos), pos);
  }

  // number := digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
  // Finite decimals become exact rationals when they fit in int64.
  Number parse_number() {
    std::size_t start = pos;
    std::string digits;
    long long scale10 = 0;  // value = digits * 10^scale10
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      digits += text[pos++];
    if (pos < text.size() && text[pos] == '.') {
      ++pos;
      std::size_t frac_start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        digits += text[pos++];
      scale10 -= static_cast<long long>(pos - frac_start);
      if (digits.empty()) fail("malformed number");
    }
    if (digits.empty()) fail("expected a number");
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      std::size_t mark = pos++;
      long long sign = 1;
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        if (text[pos] == '-') sign = -1;
        ++pos;
      }
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
        pos = mark;  // not an exponent; leave 'e' for the caller (will fail there)
      } else {
        long long ev = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
          ev = ev * 10 + (text[pos++] - '0');
          if (ev > 1000) fail("exponent out of range");
        }
        scale10 += sign * ev;
      }
    }
    // exact path
    if (digits.size() <= 18 && scale10 > -19 && scale10 < 19) {
      long long mant = 0;
      bool ok = true;
      for (char c : digits) {
        if (__builtin_mul_overflow(mant, 10LL, &mant) ||
            __builtin_add_overflow(mant, static_cast<long long>(c - '0'), &mant)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        long long p10 = 1;
        bool pow_ok = true;
        for (long long i = 0; i < (scale10 < 0 ? -scale10 : scale10); ++i)
          if (__builtin_mul_overflow(p10, 10LL, &p10)) {
            pow_ok = false;
            break;
          }
        if (pow_ok) {
          std::optional<Rational> r;
          if (scale10 < 0) {
            r = Rational::make(mant, p10);
          } else {
            long long v;
            if (!__builtin_mul_overflow(mant, p10, &v)) r = Rational::make(v, 1);
          }
          if (r) return Number::rational(*r);
        }
      }
    }
    // floating fallback
    std::string s(text.substr(start, pos - start));
    return Number::real(std::strtod(s.c_str(), nullptr));
  }

  std::string parse_ident() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= text.size() ||
        !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      fail("expected an identifier");
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      ++pos;
    return std::string(text.substr(start, pos - start));
  }

  std::optional<Func> func_of(const std::string& name) {
    if (name == "sin") return Func::Sin;
    if (name == "cos") return Func::Cos;
    if (name == "tan") return Func::Tan;
    if (name == "exp") return Func::Exp;
    if (name == "log") return Func::Log;
    if (name == "sqrt") return Func::Sqrt;
    return std::nullopt;
  }

  Expr parse_base() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of input");
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return Expr::constant(parse_number());
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      expect(')');
      return e;
    }
    std::size_t ident_pos = pos;
    std::string name = parse_ident();
    if (auto f = func_of(name)) {
      expect('(');
      Expr arg = parse_expr();
      expect(')');
      return Expr::call(*f, arg);
    }
    if (!chart.contains(name))
      throw UnknownIdentifierError("unknown identifier '" + name + "' at offset " +
                                       std::to_string(ident_pos),
                                   ident_pos, name);
    return Expr::variable(name);
  }

  // exponent := ['-'] number | '(' ['-'] number ['/' number] ')'
  Rational parse_exponent() {
    skip_ws();
    bool parens = accept('(');
    bool neg = accept('-');
    skip_ws();
    Number n = parse_number();
    long long den = 1;
    if (parens && accept('/')) {
      skip_ws();
      Number d = parse_number();
      if (!d.is_integer()) fail("exponent denominator must be an integer");
      den = d.rat().num;
    }
    if (parens) expect(')');
    if (!n.exact()) fail("exponent must be rational");
    auto r = Rational::make(n.rat().num, n.rat().den);
    if (den != 1) {
      auto scaled = Rational::mul(*r, Rational{1, den});
      if (!scaled) {
        if (den == 0) fail("zero exponent denominator");
        fail("exponent out of range");
      }
      r = scaled;
    }
    if (!r) fail("malformed exponent");
    return neg ? r->negated() : *r;
  }

  Expr parse_factor() {
    Expr base = parse_base();
    if (accept('^')) return pow(base, parse_exponent());
    return base;
  }

  Expr parse_term() {
    Expr acc = parse_factor();
    for (;;) {
      if (accept('*'))
        acc = acc * parse_factor();
      else if (accept('/'))
        acc = acc / parse_factor();
      else
        return acc;
    }
  }

  Expr parse_expr() {
    skip_ws();
    bool neg = false;
    if (accept('-'))
      neg = true;
    else
      accept('+');
    Expr acc = parse_term();
    if (neg) acc = -acc;
    for (;;) {
      if (accept('+'))
        acc = acc + parse_term();
      else if (accept('-'))
        acc = acc - parse_term();
      else
        return acc;
    }
  }
};

}  // namespace

Expr parse(std::string_view text, const Chart& chart) {
  Parser p{text, chart};
  Expr e = p.parse_expr();
  if (!p.eof()) p.fail("unexpected trailing input");
  return e;
}

}  // namespace affalg
