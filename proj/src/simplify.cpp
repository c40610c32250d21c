#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "affalg/expr.hpp"

// Canonicalization pass. Scope: constant folding, flattening of sums and
// products, collection of like terms with rational coefficients, power
// rules (x^0 -> 1, x^1 -> x, integer powers of products distributed),
// division by a constant turned into a rational coefficient. No trig
// canonicalization; probabilistic zero-testing covers what this pass
// cannot cancel structurally.

namespace affalg {

namespace {

Expr simplify_node(const Expr& e);

// (coefficient, core) decomposition of a canonical non-constant term.
std::pair<Number, Expr> split_coefficient(const Expr& e) {
  if (e.kind() == Kind::Product && !e.operands().empty() &&
      e.operands()[0].is_constant()) {
    std::vector<Expr> rest(e.operands().begin() + 1, e.operands().end());
    return {e.operands()[0].value(), Expr::product(std::move(rest))};
  }
  return {Number::integer(1), e};
}

Expr make_term(const Number& coeff, const Expr& core) {
  if (coeff.is_one()) return core;
  std::vector<Expr> kids;
  kids.push_back(Expr::constant(coeff));
  if (core.kind() == Kind::Product)
    kids.insert(kids.end(), core.operands().begin(), core.operands().end());
  else
    kids.push_back(core);
  return Expr::product(std::move(kids));
}

Expr simplify_sum(const std::vector<Expr>& kids_in) {
  Number const_acc = Number::integer(0);
  std::map<Expr, Number, ExprLess> terms;
  std::vector<Expr> flat;
  for (const auto& raw : kids_in) {
    Expr k = simplify_node(raw);
    if (k.kind() == Kind::Sum)
      flat.insert(flat.end(), k.operands().begin(), k.operands().end());
    else
      flat.push_back(k);
  }
  for (const auto& k : flat) {
    if (k.is_constant()) {
      const_acc = const_acc + k.value();
      continue;
    }
    auto [coeff, core] = split_coefficient(k);
    auto it = terms.find(core);
    if (it == terms.end())
      terms.emplace(core, coeff);
    else
      it->second = it->second + coeff;
  }
  std::vector<Expr> out;
  for (const auto& [core, coeff] : terms) {
    if (coeff.is_zero()) continue;
    out.push_back(make_term(coeff, core));
  }
  if (!const_acc.is_zero() || out.empty())
    out.push_back(Expr::constant(const_acc));
  if (out.size() == 1) return out[0];
  return Expr::sum(std::move(out));
}

Expr rebuild_power(const Expr& base, const Rational& r);

Expr simplify_product(const std::vector<Expr>& kids_in) {
  Number coeff = Number::integer(1);
  std::map<Expr, Rational, ExprLess> powers;
  std::vector<Expr> extras;  // factors whose exponent bookkeeping overflowed

  // Accumulates base^r, unfolding powers-of-powers and integer powers of
  // products so that equal bases meet each other.
  auto add_factor = [&](auto&& self, const Expr& f, const Rational& r) -> void {
    if (r.is_zero()) return;
    if (f.is_constant()) {
      if (auto v = Number::pow(f.value(), r)) {
        coeff = coeff * *v;
        return;
      }
      // out-of-domain constant power: keep symbolic
    } else if (f.kind() == Kind::Power) {
      if (auto combined = Rational::mul(f.exponent(), r); combined && r.is_integer()) {
        self(self, f.operands()[0], *combined);
        return;
      }
    } else if (f.kind() == Kind::Product && r.is_integer()) {
      for (const auto& k : f.operands()) self(self, k, r);
      return;
    }
    auto it = powers.find(f);
    if (it == powers.end()) {
      powers.emplace(f, r);
    } else if (auto sum = Rational::add(it->second, r)) {
      it->second = *sum;
    } else {
      extras.push_back(rebuild_power(f, r));
    }
  };

  std::vector<Expr> flat;
  for (const auto& raw : kids_in) {
    Expr k = simplify_node(raw);
    if (k.kind() == Kind::Product)
      flat.insert(flat.end(), k.operands().begin(), k.operands().end());
    else
      flat.push_back(k);
  }
  for (const auto& k : flat) add_factor(add_factor, k, Rational::of(1));

  if (coeff.is_zero()) return Expr::zero();

  std::vector<Expr> out;
  if (!coeff.is_one()) out.push_back(Expr::constant(coeff));
  for (const auto& [base, r] : powers) {
    if (r.is_zero()) continue;
    out.push_back(rebuild_power(base, r));
  }
  out.insert(out.end(), extras.begin(), extras.end());
  if (out.empty()) return Expr::one();
  if (out.size() == 1) return out[0];
  // distribute a lone constant over a sum so that term-wise cancellation in
  // an enclosing sum stays structural: c*(a+b) -> c*a + c*b
  if (out.size() == 2 && out[0].is_constant() && out[1].kind() == Kind::Sum) {
    std::vector<Expr> terms;
    terms.reserve(out[1].operands().size());
    for (const auto& t : out[1].operands()) terms.push_back(out[0] * t);
    return simplify_sum(terms);
  }
  return Expr::product(std::move(out));
}

Expr rebuild_power(const Expr& base, const Rational& r) {
  if (r.is_zero()) return Expr::one();
  if (r.is_one()) return base;
  return Expr::power(base, r);
}

Expr simplify_power(const Expr& e) {
  Expr base = simplify_node(e.operands()[0]);
  const Rational& r = e.exponent();
  if (r.is_zero()) return Expr::one();
  if (r.is_one()) return base;
  if (base.is_constant()) {
    if (auto v = Number::pow(base.value(), r)) return Expr::constant(*v);
    return Expr::power(base, r);
  }
  if (base.kind() == Kind::Power && r.is_integer()) {
    if (auto combined = Rational::mul(base.exponent(), r))
      return simplify_node(Expr::power(base.operands()[0], *combined));
  }
  if (base.kind() == Kind::Product && r.is_integer()) {
    std::vector<Expr> kids;
    for (const auto& k : base.operands()) kids.push_back(Expr::power(k, r));
    return simplify_node(Expr::product(std::move(kids)));
  }
  return Expr::power(base, r);
}

Expr simplify_quotient(const Expr& e) {
  Expr num = simplify_node(e.operands()[0]);
  Expr den = simplify_node(e.operands()[1]);
  if (den.is_literal_one()) return num;
  if (num.is_literal_zero() && !den.is_literal_zero()) return Expr::zero();
  if (den.is_constant() && !den.value().is_zero()) {
    if (auto inv = Number::div(Number::integer(1), den.value()))
      return simplify_node(Expr::product({Expr::constant(*inv), num}));
  }
  if (num.is_constant() && den.is_constant() && !den.value().is_zero()) {
    if (auto q = Number::div(num.value(), den.value())) return Expr::constant(*q);
  }
  return Expr::quotient(num, den);
}

Expr simplify_call(const Expr& e) {
  Expr arg = simplify_node(e.operands()[0]);
  Func f = e.func();
  if (arg.is_constant()) {
    const Number& v = arg.value();
    // exact special values
    if (v.is_zero()) {
      switch (f) {
        case Func::Sin:
        case Func::Tan:
          return Expr::zero();
        case Func::Cos:
        case Func::Exp:
          return Expr::one();
        case Func::Sqrt:
          return Expr::zero();
        case Func::Log:
          return Expr::call(f, arg);  // domain error at eval
      }
    }
    if (v.is_one() && f == Func::Log) return Expr::zero();
    if (f == Func::Sqrt && v.exact() && !v.is_negative()) {
      if (auto r = Number::pow(v, Rational{1, 2}); r && r->exact())
        return Expr::constant(*r);
    }
    // floating fold within the domain
    double x = v.value();
    switch (f) {
      case Func::Sin: return Expr::real(std::sin(x));
      case Func::Cos: return Expr::real(std::cos(x));
      case Func::Tan: {
        double t = std::tan(x);
        if (std::isfinite(t)) return Expr::real(t);
        break;
      }
      case Func::Exp: {
        double t = std::exp(x);
        if (std::isfinite(t)) return Expr::real(t);
        break;
      }
      case Func::Log:
        if (x > 0.0) return Expr::real(std::log(x));
        break;
      case Func::Sqrt:
        if (x >= 0.0) return Expr::real(std::sqrt(x));
        break;
    }
  }
  return Expr::call(f, arg);
}

Expr simplify_node(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
    case Kind::Variable:
      return e;
    case Kind::Sum:
      return simplify_sum(e.operands());
    case Kind::Product:
      return simplify_product(e.operands());
    case Kind::Power:
      return simplify_power(e);
    case Kind::Quotient:
      return simplify_quotient(e);
    case Kind::Call:
      return simplify_call(e);
  }
  return e;
}

}  // namespace

Expr simplify(const Expr& e) { return simplify_node(e); }

}  // namespace affalg
