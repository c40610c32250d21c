#pragma once

#include <iosfwd>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "affalg/chart.hpp"
#include "affalg/number.hpp"

namespace affalg {

struct ExprError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse failure; offset is the byte position in the input text.
struct ParseError : ExprError {
  ParseError(const std::string& what, std::size_t offset)
      : ExprError(what), offset(offset) {}
  std::size_t offset;
};

struct UnknownIdentifierError : ParseError {
  UnknownIdentifierError(const std::string& what, std::size_t offset, std::string ident)
      : ParseError(what, offset), identifier(std::move(ident)) {}
  std::string identifier;
};

/// Evaluation outside a function's real domain, an unbound variable, or a
/// non-finite intermediate. Evaluation never returns NaN silently.
struct EvalError : ExprError {
  using ExprError::ExprError;
};

enum class Kind { Constant, Variable, Sum, Product, Power, Quotient, Call };
enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt };

const char* func_name(Func f);

struct ExprNode;

/// Immutable symbolic expression: a shared handle to an AST node. Safe to
/// copy, share and use across threads after construction.
class Expr {
public:
  Expr();  // the literal 0

  static Expr constant(const Number& n);
  static Expr integer(long long n);
  static Expr rational(long long num, long long den);
  static Expr real(double v);
  static Expr variable(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr power(Expr base, const Rational& exp);
  static Expr quotient(Expr num, Expr den);
  static Expr call(Func f, Expr arg);

  static const Expr& zero();
  static const Expr& one();

  Kind kind() const;
  const Number& value() const;           // Constant only
  const std::string& name() const;       // Variable only
  const std::vector<Expr>& operands() const;
  const Rational& exponent() const;      // Power only
  Func func() const;                     // Call only

  bool is_literal_zero() const;
  bool is_literal_one() const;
  bool is_constant() const { return kind() == Kind::Constant; }

private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : m_node(std::move(node)) {}
  std::shared_ptr<const ExprNode> m_node;
  friend int compare(const Expr& a, const Expr& b);
};

// Arithmetic builders. These apply only cheap local rules (0+e, 1*e, constant
// folding); call simplify() for the canonical form.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr pow(const Expr& base, long long exp);
Expr pow(const Expr& base, const Rational& exp);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr tan(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);

/// Total structural order; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

void collect_variables(const Expr& e, std::set<std::string>& out);
std::set<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);

using Env = std::unordered_map<std::string, double>;

/// Evaluates at a point; throws EvalError on domain errors, unbound
/// variables or non-finite results.
double eval(const Expr& e, const Env& env);

/// Symbolic partial derivative; result is simplified. Total on the node set.
Expr diff(const Expr& e, std::string_view var);
/// Chart-checked variant; throws ExprError when var is not declared.
Expr diff(const Expr& e, std::string_view var, const Chart& chart);

/// Canonical form: constants folded, sums/products flattened and sorted,
/// like terms collected with rational coefficients, x^0 -> 1, 0*e -> 0.
/// Idempotent: simplify(simplify(e)) == simplify(e).
Expr simplify(const Expr& e);

/// Replaces variables by expressions (simultaneous substitution).
Expr substitute(const Expr& e, const std::unordered_map<std::string, Expr>& repl);

/// Round-trippable text form: parse(to_string(e)) evaluates identically to e.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// Recursive-descent parser for the grammar
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' exponent)?
///   base   := number | ident | func '(' expr ')' | '(' expr ')'
/// where exponent is a numeric literal, optionally negative or a
/// parenthesized rational like (1/2). Identifiers must be declared in the
/// chart; the six function names are reserved.
Expr parse(std::string_view text, const Chart& chart);

}  // namespace affalg
