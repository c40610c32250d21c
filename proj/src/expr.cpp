#include "affalg/expr.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace affalg {

struct ExprNode {
  Kind kind = Kind::Constant;
  Number value;
  std::string name;
  Func func = Func::Sin;
  Rational exponent{1, 1};
  std::vector<Expr> kids;
};

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
  }
  return "?";
}

namespace {

std::shared_ptr<const ExprNode> make_constant_node(const Number& n) {
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Constant;
  node->value = n;
  return node;
}

const std::shared_ptr<const ExprNode>& zero_node() {
  static const std::shared_ptr<const ExprNode> n = make_constant_node(Number::integer(0));
  return n;
}

const std::shared_ptr<const ExprNode>& one_node() {
  static const std::shared_ptr<const ExprNode> n = make_constant_node(Number::integer(1));
  return n;
}

}  // namespace

Expr::Expr() : m_node(zero_node()) {}

Expr Expr::constant(const Number& n) {
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Constant;
  node->value = n;
  return Expr(std::move(node));
}

Expr Expr::integer(long long n) { return constant(Number::integer(n)); }

Expr Expr::rational(long long num, long long den) {
  auto r = Rational::make(num, den);
  if (!r) throw ExprError("invalid rational constant");
  return constant(Number::rational(*r));
}

Expr Expr::real(double v) { return constant(Number::real(v)); }

Expr Expr::variable(std::string name) {
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Variable;
  node->name = std::move(name);
  return Expr(std::move(node));
}

Expr Expr::sum(std::vector<Expr> terms) {
  if (terms.empty()) return zero();
  if (terms.size() == 1) return terms[0];
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Sum;
  node->kids = std::move(terms);
  return Expr(std::move(node));
}

Expr Expr::product(std::vector<Expr> factors) {
  if (factors.empty()) return one();
  if (factors.size() == 1) return factors[0];
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Product;
  node->kids = std::move(factors);
  return Expr(std::move(node));
}

Expr Expr::power(Expr base, const Rational& exp) {
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Power;
  node->exponent = exp;
  node->kids.push_back(std::move(base));
  return Expr(std::move(node));
}

Expr Expr::quotient(Expr num, Expr den) {
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Quotient;
  node->kids.push_back(std::move(num));
  node->kids.push_back(std::move(den));
  return Expr(std::move(node));
}

Expr Expr::call(Func f, Expr arg) {
  auto node = std::make_shared<ExprNode>();
  node->kind = Kind::Call;
  node->func = f;
  node->kids.push_back(std::move(arg));
  return Expr(std::move(node));
}

const Expr& Expr::zero() {
  static const Expr e{zero_node()};
  return e;
}

const Expr& Expr::one() {
  static const Expr e{one_node()};
  return e;
}

Kind Expr::kind() const { return m_node->kind; }
const Number& Expr::value() const { return m_node->value; }
const std::string& Expr::name() const { return m_node->name; }
const std::vector<Expr>& Expr::operands() const { return m_node->kids; }
const Rational& Expr::exponent() const { return m_node->exponent; }
Func Expr::func() const { return m_node->func; }

bool Expr::is_literal_zero() const {
  return m_node->kind == Kind::Constant && m_node->value.is_zero();
}

bool Expr::is_literal_one() const {
  return m_node->kind == Kind::Constant && m_node->value.is_one();
}

//------------------------------------------------------------------------
// Cheap arithmetic builders
//------------------------------------------------------------------------

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_literal_zero()) return b;
  if (b.is_literal_zero()) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.value() + b.value());
  std::vector<Expr> kids;
  if (a.kind() == Kind::Sum)
    kids = a.operands();
  else
    kids.push_back(a);
  if (b.kind() == Kind::Sum)
    kids.insert(kids.end(), b.operands().begin(), b.operands().end());
  else
    kids.push_back(b);
  return Expr::sum(std::move(kids));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  return Expr::integer(-1) * a;
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_literal_zero() || b.is_literal_zero()) return Expr::zero();
  if (a.is_literal_one()) return b;
  if (b.is_literal_one()) return a;
  if (a.is_constant() && b.is_constant())
    return Expr::constant(a.value() * b.value());
  std::vector<Expr> kids;
  if (a.kind() == Kind::Product)
    kids = a.operands();
  else
    kids.push_back(a);
  if (b.kind() == Kind::Product)
    kids.insert(kids.end(), b.operands().begin(), b.operands().end());
  else
    kids.push_back(b);
  return Expr::product(std::move(kids));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_literal_one()) return a;
  if (a.is_literal_zero()) return Expr::zero();
  if (a.is_constant() && b.is_constant()) {
    if (auto q = Number::div(a.value(), b.value())) return Expr::constant(*q);
  }
  return Expr::quotient(a, b);
}

Expr pow(const Expr& base, long long exp) { return pow(base, Rational::of(exp)); }

Expr pow(const Expr& base, const Rational& exp) {
  if (exp.is_zero()) return Expr::one();
  if (exp.is_one()) return base;
  if (base.is_constant()) {
    if (auto v = Number::pow(base.value(), exp)) return Expr::constant(*v);
  }
  return Expr::power(base, exp);
}

Expr sin(const Expr& e) { return Expr::call(Func::Sin, e); }
Expr cos(const Expr& e) { return Expr::call(Func::Cos, e); }
Expr tan(const Expr& e) { return Expr::call(Func::Tan, e); }
Expr exp(const Expr& e) { return Expr::call(Func::Exp, e); }
Expr log(const Expr& e) { return Expr::call(Func::Log, e); }
Expr sqrt(const Expr& e) { return Expr::call(Func::Sqrt, e); }

//------------------------------------------------------------------------
// Structural order
//------------------------------------------------------------------------

namespace {

int kind_rank(Kind k) {
  switch (k) {
    case Kind::Constant: return 0;
    case Kind::Variable: return 1;
    case Kind::Call: return 2;
    case Kind::Power: return 3;
    case Kind::Product: return 4;
    case Kind::Quotient: return 5;
    case Kind::Sum: return 6;
  }
  return 7;
}

int compare_rational(const Rational& a, const Rational& b) {
  double av = a.value(), bv = b.value();
  if (av < bv) return -1;
  if (av > bv) return 1;
  if (a.num != b.num) return a.num < b.num ? -1 : 1;
  if (a.den != b.den) return a.den < b.den ? -1 : 1;
  return 0;
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.m_node == b.m_node) return 0;
  Kind ka = a.kind(), kb = b.kind();
  if (ka != kb) return kind_rank(ka) < kind_rank(kb) ? -1 : 1;
  switch (ka) {
    case Kind::Constant:
      return Number::compare(a.value(), b.value());
    case Kind::Variable:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Call: {
      if (a.func() != b.func())
        return static_cast<int>(a.func()) < static_cast<int>(b.func()) ? -1 : 1;
      return compare(a.operands()[0], b.operands()[0]);
    }
    case Kind::Power: {
      int c = compare(a.operands()[0], b.operands()[0]);
      if (c != 0) return c;
      return compare_rational(a.exponent(), b.exponent());
    }
    default: {
      const auto& ka_ops = a.operands();
      const auto& kb_ops = b.operands();
      std::size_t n = std::min(ka_ops.size(), kb_ops.size());
      for (std::size_t i = 0; i < n; ++i) {
        int c = compare(ka_ops[i], kb_ops[i]);
        if (c != 0) return c;
      }
      if (ka_ops.size() != kb_ops.size())
        return ka_ops.size() < kb_ops.size() ? -1 : 1;
      return 0;
    }
  }
}

bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

void collect_variables(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Kind::Constant:
      return;
    case Kind::Variable:
      out.insert(e.name());
      return;
    default:
      for (const auto& k : e.operands()) collect_variables(k, out);
  }
}

std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> out;
  collect_variables(e, out);
  return out;
}

bool depends_on(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case Kind::Constant:
      return false;
    case Kind::Variable:
      return e.name() == var;
    default:
      for (const auto& k : e.operands())
        if (depends_on(k, var)) return true;
      return false;
  }
}

//------------------------------------------------------------------------
// Evaluation
//------------------------------------------------------------------------

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

}  // namespace

double eval(const Expr& e, const Env& env) {
  switch (e.kind()) {
    case Kind::Constant:
      return e.value().value();
    case Kind::Variable: {
      auto it = env.find(e.name());
      if (it == env.end()) throw EvalError("unbound variable '" + e.name() + "'");
      return it->second;
    }
    case Kind::Sum: {
      double acc = 0.0;
      for (const auto& k : e.operands()) acc += eval(k, env);
      return checked(acc, "sum");
    }
    case Kind::Product: {
      double acc = 1.0;
      for (const auto& k : e.operands()) acc *= eval(k, env);
      return checked(acc, "product");
    }
    case Kind::Power: {
      double b = eval(e.operands()[0], env);
      const Rational& r = e.exponent();
      if (r.is_integer()) {
        if (b == 0.0 && r.is_negative()) throw EvalError("zero raised to a negative power");
        return checked(std::pow(b, static_cast<double>(r.num)), "power");
      }
      if (b < 0.0) throw EvalError("fractional power of a negative base");
      if (b == 0.0 && r.is_negative()) throw EvalError("zero raised to a negative power");
      return checked(std::pow(b, r.value()), "power");
    }
    case Kind::Quotient: {
      double den = eval(e.operands()[1], env);
      if (den == 0.0) throw EvalError("division by zero");
      return checked(eval(e.operands()[0], env) / den, "quotient");
    }
    case Kind::Call: {
      double u = eval(e.operands()[0], env);
      switch (e.func()) {
        case Func::Sin: return checked(std::sin(u), "sin");
        case Func::Cos: return checked(std::cos(u), "cos");
        case Func::Tan: return checked(std::tan(u), "tan");
        case Func::Exp: return checked(std::exp(u), "exp");
        case Func::Log:
          if (u <= 0.0) throw EvalError("log of a non-positive value");
          return checked(std::log(u), "log");
        case Func::Sqrt:
          if (u < 0.0) throw EvalError("sqrt of a negative value");
          return checked(std::sqrt(u), "sqrt");
      }
      throw EvalError("unknown function");
    }
  }
  throw EvalError("malformed expression node");
}

//------------------------------------------------------------------------
// Differentiation
//------------------------------------------------------------------------

namespace {

Expr diff_raw(const Expr& e, std::string_view var) {
  switch (e.kind()) {
    case Kind::Constant:
      return Expr::zero();
    case Kind::Variable:
      return e.name() == var ? Expr::one() : Expr::zero();
    case Kind::Sum: {
      std::vector<Expr> terms;
      for (const auto& k : e.operands()) {
        Expr d = diff_raw(k, var);
        if (!d.is_literal_zero()) terms.push_back(d);
      }
      return Expr::sum(std::move(terms));
    }
    case Kind::Product: {
      const auto& kids = e.operands();
      std::vector<Expr> terms;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        Expr d = diff_raw(kids[i], var);
        if (d.is_literal_zero()) continue;
        Expr t = d;
        for (std::size_t j = 0; j < kids.size(); ++j)
          if (j != i) t = t * kids[j];
        terms.push_back(t);
      }
      return Expr::sum(std::move(terms));
    }
    case Kind::Power: {
      const Expr& b = e.operands()[0];
      Expr db = diff_raw(b, var);
      if (db.is_literal_zero()) return Expr::zero();
      const Rational& r = e.exponent();
      auto rm1 = Rational::add(r, Rational::of(-1));
      if (!rm1) throw ExprError("exponent overflow in derivative");
      return Expr::constant(Number::rational(r)) * pow(b, *rm1) * db;
    }
    case Kind::Quotient: {
      const Expr& a = e.operands()[0];
      const Expr& b = e.operands()[1];
      Expr da = diff_raw(a, var);
      Expr db = diff_raw(b, var);
      if (db.is_literal_zero()) return Expr::quotient(da, b);
      return Expr::quotient(da * b - a * db, pow(b, 2));
    }
    case Kind::Call: {
      const Expr& u = e.operands()[0];
      Expr du = diff_raw(u, var);
      if (du.is_literal_zero()) return Expr::zero();
      switch (e.func()) {
        case Func::Sin: return cos(u) * du;
        case Func::Cos: return -(sin(u) * du);
        case Func::Tan: return (Expr::one() + pow(tan(u), 2)) * du;
        case Func::Exp: return exp(u) * du;
        case Func::Log: return du / u;
        case Func::Sqrt: return du / (Expr::integer(2) * sqrt(u));
      }
      throw ExprError("unknown function in derivative");
    }
  }
  throw ExprError("malformed expression node");
}

}  // namespace

Expr diff(const Expr& e, std::string_view var) { return simplify(diff_raw(e, var)); }

Expr diff(const Expr& e, std::string_view var, const Chart& chart) {
  if (!chart.contains(var))
    throw ExprError("unknown variable '" + std::string(var) + "' in derivative");
  return diff(e, var);
}

//------------------------------------------------------------------------
// Substitution
//------------------------------------------------------------------------

Expr substitute(const Expr& e, const std::unordered_map<std::string, Expr>& repl) {
  switch (e.kind()) {
    case Kind::Constant:
      return e;
    case Kind::Variable: {
      auto it = repl.find(e.name());
      return it == repl.end() ? e : it->second;
    }
    case Kind::Sum:
    case Kind::Product: {
      std::vector<Expr> kids;
      kids.reserve(e.operands().size());
      for (const auto& k : e.operands()) kids.push_back(substitute(k, repl));
      return e.kind() == Kind::Sum ? Expr::sum(std::move(kids))
                                   : Expr::product(std::move(kids));
    }
    case Kind::Power:
      return Expr::power(substitute(e.operands()[0], repl), e.exponent());
    case Kind::Quotient:
      return Expr::quotient(substitute(e.operands()[0], repl),
                            substitute(e.operands()[1], repl));
    case Kind::Call:
      return Expr::call(e.func(), substitute(e.operands()[0], repl));
  }
  throw ExprError("malformed expression node");
}

//------------------------------------------------------------------------
// Printing
//------------------------------------------------------------------------

namespace {

enum Prec { PrecSum = 0, PrecTerm = 1, PrecFactor = 2, PrecAtom = 3 };

void print_expr(std::ostream& os, const Expr& e, int parent_prec);

// Splits a leading minus sign off a term for nicer sums.
bool term_is_negative(const Expr& e) {
  if (e.is_constant()) return e.value().is_negative();
  if (e.kind() == Kind::Product && !e.operands().empty() &&
      e.operands()[0].is_constant())
    return e.operands()[0].value().is_negative();
  return false;
}

Expr term_negated(const Expr& e) {
  if (e.is_constant()) return Expr::constant(-e.value());
  std::vector<Expr> kids = e.operands();
  Expr c = Expr::constant(-kids[0].value());
  if (c.is_literal_one() && kids.size() > 1) {
    kids.erase(kids.begin());
    return Expr::product(std::move(kids));
  }
  kids[0] = c;
  return Expr::product(std::move(kids));
}

void print_constant(std::ostream& os, const Number& n, int parent_prec) {
  std::string s = n.str();
  bool needs_parens =
      (s.find('/') != std::string::npos && parent_prec >= PrecFactor) ||
      (n.is_negative() && parent_prec >= PrecTerm);
  if (needs_parens)
    os << "(" << s << ")";
  else
    os << s;
}

void print_expr(std::ostream& os, const Expr& e, int parent_prec) {
  switch (e.kind()) {
    case Kind::Constant:
      print_constant(os, e.value(), parent_prec);
      return;
    case Kind::Variable:
      os << e.name();
      return;
    case Kind::Sum: {
      bool parens = parent_prec > PrecSum;
      if (parens) os << "(";
      const auto& kids = e.operands();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i == 0 && term_is_negative(kids[i])) {
          os << "-";
          print_expr(os, term_negated(kids[i]), PrecTerm);
        } else if (i == 0) {
          print_expr(os, kids[i], PrecSum + 1);
        } else if (term_is_negative(kids[i])) {
          os << " - ";
          print_expr(os, term_negated(kids[i]), PrecSum + 1);
        } else {
          os << " + ";
          print_expr(os, kids[i], PrecSum + 1);
        }
      }
      if (parens) os << ")";
      return;
    }
    case Kind::Product: {
      if (parent_prec <= PrecSum && term_is_negative(e)) {
        os << "-";
        print_expr(os, term_negated(e), PrecTerm);
        return;
      }
      bool parens = parent_prec > PrecTerm;
      if (parens) os << "(";
      const auto& kids = e.operands();
      for (std::size_t i = 0; i < kids.size(); ++i) {
        if (i) os << "*";
        print_expr(os, kids[i], PrecFactor);
      }
      if (parens) os << ")";
      return;
    }
    case Kind::Quotient: {
      bool parens = parent_prec > PrecTerm;
      if (parens) os << "(";
      print_expr(os, e.operands()[0], PrecFactor);
      os << "/";
      print_expr(os, e.operands()[1], PrecAtom);
      if (parens) os << ")";
      return;
    }
    case Kind::Power: {
      bool parens = parent_prec >= PrecAtom;  // a power cannot be a power's base
      if (parens) os << "(";
      print_expr(os, e.operands()[0], PrecAtom);
      const Rational& r = e.exponent();
      if (r.is_integer() && !r.is_negative())
        os << "^" << r.num;
      else
        os << "^(" << r.str() << ")";
      if (parens) os << ")";
      return;
    }
    case Kind::Call:
      os << func_name(e.func()) << "(";
      print_expr(os, e.operands()[0], PrecSum);
      os << ")";
      return;
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e, PrecSum);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  print_expr(os, e, PrecSum);
  return os;
}

}  // namespace affalg
