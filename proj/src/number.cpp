#include "affalg/number.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "affalg/expr.hpp"

namespace affalg {

namespace {

bool safe_neg(long long a, long long& out) {
  if (a == std::numeric_limits<long long>::min()) return false;
  out = -a;
  return true;
}

bool safe_add(long long a, long long b, long long& out) {
  return !__builtin_add_overflow(a, b, &out);
}

bool safe_mul(long long a, long long b, long long& out) {
  return !__builtin_mul_overflow(a, b, &out);
}

}  // namespace

std::optional<Rational> Rational::make(long long num, long long den) {
  if (den == 0) return std::nullopt;
  if (num == std::numeric_limits<long long>::min() ||
      den == std::numeric_limits<long long>::min())
    return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

std::optional<Rational> Rational::add(const Rational& a, const Rational& b) {
  long long x, y, n, d;
  if (!safe_mul(a.num, b.den, x)) return std::nullopt;
  if (!safe_mul(b.num, a.den, y)) return std::nullopt;
  if (!safe_add(x, y, n)) return std::nullopt;
  if (!safe_mul(a.den, b.den, d)) return std::nullopt;
  return make(n, d);
}

std::optional<Rational> Rational::mul(const Rational& a, const Rational& b) {
  // Cross-reduce first to dodge avoidable overflow.
  long long g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
  long long g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
  long long an = a.num / (g1 ? g1 : 1), bd = b.den / (g1 ? g1 : 1);
  long long bn = b.num / (g2 ? g2 : 1), ad = a.den / (g2 ? g2 : 1);
  long long n, d;
  if (!safe_mul(an, bn, n)) return std::nullopt;
  if (!safe_mul(ad, bd, d)) return std::nullopt;
  return make(n, d);
}

std::string Rational::str() const {
  std::ostringstream os;
  os << num;
  if (den != 1) os << "/" << den;
  return os.str();
}

Number Number::integer(long long n) {
  Number r;
  r.m_exact = true;
  r.m_rat = Rational{n, 1};
  r.m_value = static_cast<double>(n);
  return r;
}

Number Number::rational(const Rational& q) {
  Number r;
  r.m_exact = true;
  r.m_rat = q;
  r.m_value = q.value();
  return r;
}

Number Number::real(double v) {
  if (!std::isfinite(v)) throw ExprError("non-finite numeric constant");
  Number r;
  r.m_exact = false;
  r.m_rat = Rational{0, 1};
  r.m_value = v;
  return r;
}

Number Number::operator-() const {
  if (m_exact) {
    long long n;
    if (safe_neg(m_rat.num, n)) return rational(Rational{n, m_rat.den});
  }
  return real(-m_value);
}

Number operator+(const Number& a, const Number& b) {
  if (a.m_exact && b.m_exact) {
    if (auto r = Rational::add(a.m_rat, b.m_rat)) return Number::rational(*r);
  }
  return Number::real(a.m_value + b.m_value);
}

Number operator-(const Number& a, const Number& b) { return a + (-b); }

Number operator*(const Number& a, const Number& b) {
  if (a.m_exact && b.m_exact) {
    if (auto r = Rational::mul(a.m_rat, b.m_rat)) return Number::rational(*r);
  }
  return Number::real(a.m_value * b.m_value);
}

std::optional<Number> Number::div(const Number& a, const Number& b) {
  if (b.is_zero()) return std::nullopt;
  if (a.m_exact && b.m_exact) {
    if (auto inv = Rational::make(b.m_rat.den, b.m_rat.num)) {
      if (auto r = Rational::mul(a.m_rat, *inv)) return Number::rational(*r);
    }
  }
  double v = a.m_value / b.m_value;
  if (!std::isfinite(v)) return std::nullopt;
  return Number::real(v);
}

namespace {

// Floor of the q-th root if n is a perfect q-th power, else nullopt.
std::optional<long long> exact_root(long long n, long long q) {
  if (n < 0) return std::nullopt;
  if (n <= 1) return n;
  long long r = static_cast<long long>(std::llround(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(q))));
  for (long long cand = r > 1 ? r - 1 : 0; cand <= r + 1; ++cand) {
    long long acc = 1;
    bool ok = true;
    for (long long i = 0; i < q; ++i) {
      if (!safe_mul(acc, cand, acc)) {
        ok = false;
        break;
      }
    }
    if (ok && acc == n) return cand;
  }
  return std::nullopt;
}

std::optional<long long> int_pow(long long b, long long e) {
  long long acc = 1;
  for (long long i = 0; i < e; ++i)
    if (!safe_mul(acc, b, acc)) return std::nullopt;
  return acc;
}

}  // namespace

std::optional<Number> Number::pow(const Number& base, const Rational& exp) {
  if (exp.is_zero()) return Number::integer(1);
  if (base.is_zero()) {
    if (exp.is_negative()) return std::nullopt;
    return Number::integer(0);
  }
  if (base.m_exact) {
    long long e = exp.num < 0 ? -exp.num : exp.num;
    Rational b = base.m_rat;
    if (exp.num < 0) {
      auto inv = Rational::make(b.den, b.num);
      if (!inv) return std::nullopt;
      b = *inv;
    }
    if (exp.den == 1) {
      auto n = int_pow(b.num, e);
      auto d = int_pow(b.den, e);
      if (n && d) {
        if (auto r = Rational::make(*n, *d)) return Number::rational(*r);
      }
    } else if (b.num > 0) {
      auto rn = exact_root(b.num, exp.den);
      auto rd = exact_root(b.den, exp.den);
      if (rn && rd) {
        auto n = int_pow(*rn, e);
        auto d = int_pow(*rd, e);
        if (n && d) {
          if (auto r = Rational::make(*n, *d)) return Number::rational(*r);
        }
      }
    }
  }
  // Floating fallback within the real domain.
  double b = base.m_value;
  double x = exp.value();
  if (b < 0.0) {
    if (!exp.is_integer()) return std::nullopt;
    double v = std::pow(b, static_cast<double>(exp.num));
    if (!std::isfinite(v)) return std::nullopt;
    return Number::real(v);
  }
  double v = std::pow(b, x);
  if (!std::isfinite(v)) return std::nullopt;
  return Number::real(v);
}

bool operator==(const Number& a, const Number& b) {
  if (a.m_exact != b.m_exact) return false;
  if (a.m_exact) return a.m_rat == b.m_rat;
  return a.m_value == b.m_value;
}

int Number::compare(const Number& a, const Number& b) {
  if (a.m_value < b.m_value) return -1;
  if (a.m_value > b.m_value) return 1;
  if (a.m_exact != b.m_exact) return a.m_exact ? -1 : 1;
  if (!a.m_exact) return 0;
  if (a.m_rat.num != b.m_rat.num) return a.m_rat.num < b.m_rat.num ? -1 : 1;
  if (a.m_rat.den != b.m_rat.den) return a.m_rat.den < b.m_rat.den ? -1 : 1;
  return 0;
}

std::string Number::str() const {
  if (m_exact) return m_rat.str();
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", m_value);
  return buf;
}

}  // namespace affalg
