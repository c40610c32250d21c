#pragma once

#include <map>
#include <vector>

#include "affalg/algebroid.hpp"

namespace affalg {

/// Strictly increasing frame indices; the storage key of a form component.
using MultiIndex = std::vector<std::size_t>;

/// Sorts a sequence of frame indices in place. Returns 0 when an index
/// repeats, otherwise the parity sign (+1/-1) of the sorting permutation.
int normalize_multi_index(MultiIndex& idx);

/// Graded antisymmetric k-form over an algebroid frame, stored sparsely by
/// increasing multi-index. Immutable value semantics; operations return new
/// forms with simplified, zero-pruned coefficient tables.
class KForm {
public:
  KForm(AlgebroidPtr alg, std::size_t degree);  // the zero k-form
  static KForm function(AlgebroidPtr alg, Expr f);        // degree 0
  static KForm coframe(AlgebroidPtr alg, std::size_t a);  // e^a

  const AlgebroidPtr& algebroid() const { return m_alg; }
  std::size_t degree() const { return m_degree; }
  const std::map<MultiIndex, Expr>& coefficients() const { return m_coeff; }

  /// Sign-adjusted component for any index order; zero when absent.
  Expr coefficient(MultiIndex idx) const;
  /// Accumulates value onto the (sign-normalized) index; no-op on repeats.
  void add_term(MultiIndex idx, const Expr& value);

  /// Simplifies every coefficient and prunes structural zeros.
  KForm normalized() const;
  ZeroResult all_zero(const ZeroOptions& opts = {}) const;

  friend KForm operator+(const KForm& a, const KForm& b);
  friend KForm operator-(const KForm& a, const KForm& b);
  KForm scaled(const Expr& f) const;

  /// Re-expresses the form in an alternative coframe, given each old
  /// coframe element as a combination of the new ones: e^a = M[a][B] eps^B.
  KForm reexpress(const std::vector<std::vector<Expr>>& old_in_new) const;

private:
  AlgebroidPtr m_alg;
  std::size_t m_degree;
  std::map<MultiIndex, Expr> m_coeff;
};

/// Exterior differential: df = rho^i_a df/dz^i e^a on functions,
/// de^c = -1/2 C^c_ab e^a ^ e^b on the coframe, antiderivation throughout.
KForm d(const KForm& omega);

/// Graded product: wedge(w,h) = (-1)^{kl} wedge(h,w).
KForm wedge(const KForm& a, const KForm& b);

/// Interior product i_Z; throws on degree 0.
KForm contract(const Section& z, const KForm& omega);

/// Cartan formula d i_Z + i_Z d (i_Z d only on functions).
KForm lie_derive(const Section& z, const KForm& omega);

/// <zeta, theta> pairing of a section with a 1-form.
Expr pair(const Section& z, const KForm& one_form);

/// Numeric invertibility probe: evaluates det(M) at a seeded sample point;
/// throws AlgebroidError naming the point when |det| <= tol.
void check_invertible_at_sample(const std::vector<std::vector<Expr>>& m,
                                const ZeroOptions& opts = {});

}  // namespace affalg
