#include "affalg/kform.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace affalg {

int normalize_multi_index(MultiIndex& idx) {
  int sign = 1;
  // insertion sort, counting swaps
  for (std::size_t i = 1; i < idx.size(); ++i) {
    std::size_t j = i;
    while (j > 0 && idx[j - 1] > idx[j]) {
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
      --j;
    }
  }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}

KForm::KForm(AlgebroidPtr alg, std::size_t degree)
    : m_alg(std::move(alg)), m_degree(degree) {
  if (!m_alg) throw AlgebroidError("form without an owning algebroid");
}

KForm KForm::function(AlgebroidPtr alg, Expr f) {
  for (const auto& v : free_variables(f))
    if (!alg->chart().contains(v))
      throw AlgebroidError("function depends on '" + v +
                           "', which is not a chart coordinate");
  KForm out(std::move(alg), 0);
  if (!f.is_literal_zero()) out.m_coeff.emplace(MultiIndex{}, std::move(f));
  return out;
}

KForm KForm::coframe(AlgebroidPtr alg, std::size_t a) {
  if (a >= alg->frame_size()) throw AlgebroidError("coframe index out of range");
  KForm out(std::move(alg), 1);
  out.m_coeff.emplace(MultiIndex{a}, Expr::one());
  return out;
}

Expr KForm::coefficient(MultiIndex idx) const {
  if (idx.size() != m_degree) throw AlgebroidError("component index has wrong length");
  int sign = normalize_multi_index(idx);
  if (sign == 0) return Expr::zero();
  auto it = m_coeff.find(idx);
  if (it == m_coeff.end()) return Expr::zero();
  return sign == 1 ? it->second : simplify(-it->second);
}

void KForm::add_term(MultiIndex idx, const Expr& value) {
  if (idx.size() != m_degree) throw AlgebroidError("component index has wrong length");
  for (std::size_t a : idx)
    if (a >= m_alg->frame_size()) throw AlgebroidError("frame index out of range");
  if (value.is_literal_zero()) return;
  int sign = normalize_multi_index(idx);
  if (sign == 0) return;
  Expr signed_value = sign == 1 ? value : -value;
  auto it = m_coeff.find(idx);
  if (it == m_coeff.end())
    m_coeff.emplace(std::move(idx), signed_value);
  else
    it->second = it->second + signed_value;
}

KForm KForm::normalized() const {
  KForm out(m_alg, m_degree);
  for (const auto& [idx, c] : m_coeff) {
    Expr s = simplify(c);
    if (!s.is_literal_zero()) out.m_coeff.emplace(idx, std::move(s));
  }
  return out;
}

ZeroResult KForm::all_zero(const ZeroOptions& opts) const {
  std::vector<ZeroResult> results;
  for (const auto& [idx, c] : m_coeff) results.push_back(is_zero(c, opts));
  return combine_zero_results(results);
}

KForm operator+(const KForm& a, const KForm& b) {
  if (a.m_alg != b.m_alg) throw AlgebroidError("forms over different algebroids");
  if (a.m_degree != b.m_degree) throw AlgebroidError("adding forms of different degree");
  KForm out = a;
  for (const auto& [idx, c] : b.m_coeff) out.add_term(idx, c);
  return out.normalized();
}

KForm operator-(const KForm& a, const KForm& b) { return a + b.scaled(Expr::integer(-1)); }

KForm KForm::scaled(const Expr& f) const {
  KForm out(m_alg, m_degree);
  if (f.is_literal_zero()) return out;
  for (const auto& [idx, c] : m_coeff) {
    Expr v = simplify(f * c);
    if (!v.is_literal_zero()) out.m_coeff.emplace(idx, std::move(v));
  }
  return out;
}

KForm wedge(const KForm& a, const KForm& b) {
  if (a.algebroid() != b.algebroid())
    throw AlgebroidError("forms over different algebroids");
  const std::size_t k = a.degree() + b.degree();
  KForm out(a.algebroid(), k);
  if (k > a.algebroid()->frame_size()) return out;  // graded dimension bound
  for (const auto& [ia, ca] : a.coefficients()) {
    for (const auto& [ib, cb] : b.coefficients()) {
      MultiIndex merged = ia;
      merged.insert(merged.end(), ib.begin(), ib.end());
      out.add_term(std::move(merged), ca * cb);
    }
  }
  return out.normalized();
}

namespace {

// (df)_a = rho^i_a df/dz^i over all chart coordinates.
Expr d_function_component(const VectorAlgebroid& alg, const Expr& f, std::size_t a) {
  Expr acc = Expr::zero();
  for (std::size_t i = 0; i < alg.chart().size(); ++i) {
    Expr df = diff(f, alg.chart().name(i));
    if (df.is_literal_zero()) continue;
    const Expr& rho = alg.anchor(i, a);
    if (rho.is_literal_zero()) continue;
    acc = acc + rho * df;
  }
  return simplify(acc);
}

}  // namespace

KForm d(const KForm& omega) {
  const auto& alg = *omega.algebroid();
  const std::size_t F = alg.frame_size();
  KForm out(omega.algebroid(), omega.degree() + 1);
  if (omega.degree() + 1 > F) return out;
  for (const auto& [idx, c] : omega.coefficients()) {
    // dc ^ e^I
    for (std::size_t a = 0; a < F; ++a) {
      Expr da = d_function_component(alg, c, a);
      if (da.is_literal_zero()) continue;
      MultiIndex j;
      j.reserve(idx.size() + 1);
      j.push_back(a);
      j.insert(j.end(), idx.begin(), idx.end());
      out.add_term(std::move(j), da);
    }
    // c * sum_p (-1)^p e^{i0} ^ ... ^ de^{ip} ^ ... with
    // de^{ip} = -sum_{a<b} C^{ip}_ab e^a ^ e^b
    for (std::size_t p = 0; p < idx.size(); ++p) {
      int outer_sign = (p % 2 == 0) ? 1 : -1;
      for (const auto& s : alg.structure_entries()) {
        if (s.c != idx[p]) continue;
        MultiIndex j;
        j.reserve(idx.size() + 1);
        for (std::size_t q = 0; q < p; ++q) j.push_back(idx[q]);
        j.push_back(s.a);
        j.push_back(s.b);
        for (std::size_t q = p + 1; q < idx.size(); ++q) j.push_back(idx[q]);
        Expr v = Expr::integer(-outer_sign) * s.value * c;
        out.add_term(std::move(j), v);
      }
    }
  }
  return out.normalized();
}

KForm contract(const Section& z, const KForm& omega) {
  if (z.algebroid() != omega.algebroid())
    throw AlgebroidError("contraction across different algebroids");
  if (omega.degree() == 0)
    throw AlgebroidError("cannot contract a degree-0 form");
  KForm out(omega.algebroid(), omega.degree() - 1);
  for (const auto& [idx, c] : omega.coefficients()) {
    for (std::size_t p = 0; p < idx.size(); ++p) {
      const Expr& za = z.coefficient(idx[p]);
      if (za.is_literal_zero()) continue;
      MultiIndex j;
      j.reserve(idx.size() - 1);
      for (std::size_t q = 0; q < idx.size(); ++q)
        if (q != p) j.push_back(idx[q]);
      Expr v = (p % 2 == 0) ? za * c : -(za * c);
      out.add_term(std::move(j), v);
    }
  }
  return out.normalized();
}

KForm lie_derive(const Section& z, const KForm& omega) {
  if (omega.degree() == 0) return contract(z, d(omega));
  return (contract(z, d(omega)) + d(contract(z, omega))).normalized();
}

Expr pair(const Section& z, const KForm& one_form) {
  if (one_form.degree() != 1) throw AlgebroidError("pairing requires a 1-form");
  KForm c = contract(z, one_form);
  auto it = c.coefficients().find(MultiIndex{});
  return it == c.coefficients().end() ? Expr::zero() : it->second;
}

KForm KForm::reexpress(const std::vector<std::vector<Expr>>& old_in_new) const {
  const std::size_t F = m_alg->frame_size();
  if (old_in_new.size() != F)
    throw AlgebroidError("coframe change matrix has wrong row count");
  for (const auto& row : old_in_new)
    if (row.size() != F) throw AlgebroidError("coframe change matrix has wrong column count");
  check_invertible_at_sample(old_in_new);
  KForm out(m_alg, m_degree);
  for (const auto& [idx, c] : m_coeff) {
    // expand c * (M[i0][B0] eps^B0) ^ (M[i1][B1] eps^B1) ^ ...
    MultiIndex target(m_degree, 0);
    auto expand = [&](auto&& self, std::size_t p, const Expr& acc) -> void {
      if (p == idx.size()) {
        out.add_term(target, acc);
        return;
      }
      for (std::size_t b = 0; b < F; ++b) {
        const Expr& m = old_in_new[idx[p]][b];
        if (m.is_literal_zero()) continue;
        target[p] = b;
        self(self, p + 1, acc * m);
      }
    };
    expand(expand, 0, c);
  }
  return out.normalized();
}

void check_invertible_at_sample(const std::vector<std::vector<Expr>>& m,
                                const ZeroOptions& opts) {
  const std::size_t n = m.size();
  std::set<std::string> vars;
  for (const auto& row : m)
    for (const auto& e : row) collect_variables(e, vars);
  std::mt19937_64 rng(opts.seed);

  auto det_at = [&](Env& env) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) a[i][j] = eval(m[i][j], env);
    double det = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n; ++r)
        if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
      if (piv != col) {
        std::swap(a[piv], a[col]);
        det = -det;
      }
      det *= a[col][col];
      if (a[col][col] == 0.0) return 0.0;
      for (std::size_t r = col + 1; r < n; ++r) {
        double f = a[r][col] / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[r][j] -= f * a[col][j];
      }
    }
    return det;
  };

  // several probe points; singular only when every one degenerates
  double best = 0.0;
  std::ostringstream last_point;
  int valid = 0;
  for (int k = 0; k < 5; ++k) {
    Env env;
    last_point.str("");
    for (const auto& v : vars) {
      auto range = opts.default_range;
      if (auto it = opts.box.find(v); it != opts.box.end()) range = it->second;
      std::uniform_real_distribution<double> dist(range.first, range.second);
      env[v] = dist(rng);
      last_point << (env.size() > 1 ? ", " : "") << v << "=" << env[v];
    }
    try {
      best = std::max(best, std::abs(det_at(env)));
    } catch (const EvalError&) {
      continue;
    }
    ++valid;
    if (best > 1e-10) return;
    if (vars.empty()) break;
  }
  if (valid == 0) return;  // nothing evaluable; leave it to the caller's checks
  throw AlgebroidError("coframe change matrix is numerically singular at sample point (" +
                       last_point.str() + ")");
}

}  // namespace affalg
