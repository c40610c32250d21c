#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace affalg {

/// Normalized rational with int64 components (den > 0). Construction fails
/// instead of overflowing; callers fall back to floating point.
struct Rational {
  long long num = 0;
  long long den = 1;

  static std::optional<Rational> make(long long num, long long den);
  static Rational of(long long n) { return Rational{n, 1}; }

  bool is_zero() const { return num == 0; }
  bool is_one() const { return num == 1 && den == 1; }
  bool is_integer() const { return den == 1; }
  bool is_negative() const { return num < 0; }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  static std::optional<Rational> add(const Rational& a, const Rational& b);
  static std::optional<Rational> mul(const Rational& a, const Rational& b);
  Rational negated() const { return Rational{-num, den}; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  std::string str() const;
};

/// Scalar constant: an exact Rational when possible, binary64 otherwise.
/// Arithmetic stays exact until an operation overflows int64, then degrades
/// to double. Values are always finite.
class Number {
public:
  Number() : m_exact(true), m_rat{0, 1}, m_value(0.0) {}

  static Number integer(long long n);
  static Number rational(const Rational& r);
  static Number real(double v);  // throws ExprError on non-finite input

  bool exact() const { return m_exact; }
  double value() const { return m_value; }
  const Rational& rat() const { return m_rat; }  // meaningful only when exact()

  bool is_zero() const { return m_exact ? m_rat.is_zero() : m_value == 0.0; }
  bool is_one() const { return m_exact ? m_rat.is_one() : m_value == 1.0; }
  bool is_negative() const { return m_value < 0.0; }
  bool is_integer() const { return m_exact && m_rat.is_integer(); }

  Number operator-() const;
  friend Number operator+(const Number& a, const Number& b);
  friend Number operator-(const Number& a, const Number& b);
  friend Number operator*(const Number& a, const Number& b);
  /// Division; nullopt when b is zero.
  static std::optional<Number> div(const Number& a, const Number& b);
  /// Exact or floating power; nullopt when outside the real domain
  /// (negative base with fractional exponent, zero with negative exponent)
  /// or when the result is non-finite.
  static std::optional<Number> pow(const Number& base, const Rational& exp);

  /// Structural equality: an exact 1/2 differs from the double 0.5.
  friend bool operator==(const Number& a, const Number& b);
  /// Total order used for canonical sorting (value first, exact before inexact).
  static int compare(const Number& a, const Number& b);

  std::string str() const;

private:
  bool m_exact;
  Rational m_rat;
  double m_value;
};

}  // namespace affalg
