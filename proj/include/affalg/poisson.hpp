#pragma once

#include <vector>

#include "affalg/algebroid.hpp"
#include "affalg/validate.hpp"

namespace affalg {

/// Linear Poisson structure on the extended dual E-dagger induced by the
/// algebroid on the bidual: coordinates (x^i, mu_0..mu_n) and component
/// table {x,x} = 0, {mu_a, x^i} = rho^i_a, {mu_a, mu_b} = C^c_ab mu_c.
class PoissonStructure {
public:
  /// Builds the tensor from any bidual-frame algebroid; frame position 0 is
  /// the distinguished mu_0 direction.
  static PoissonStructure from(const AlgebroidPtr& bidual);

  const AlgebroidPtr& source() const { return m_source; }
  const Chart& dual_chart() const { return m_chart; }
  /// Chart position of mu_a.
  std::size_t mu_index(std::size_t a) const { return m_base_dim + a; }
  std::size_t base_dim() const { return m_base_dim; }

  /// Lambda^{AB} over the dual chart; skew in (A, B).
  const Expr& component(std::size_t a, std::size_t b) const;

  /// {F, G} = Lambda^{AB} dF/dz_A dG/dz_B, total on the expression language.
  Expr bracket(const Expr& f, const Expr& g) const;

  /// The linear function zeta-hat = zeta^a mu_a of a section of the bidual.
  Expr linear_function_of(const Section& zeta) const;

  /// Jacobi identity on all coordinate triples.
  std::vector<AxiomCheck> check_jacobi(const ZeroOptions& opts = {}) const;
  /// dLambda^{AB}/dmu_0 = 0 for every component; Zero exactly when the
  /// source restricts to the affine bundle.
  AxiomCheck check_mu0_independence(const ZeroOptions& opts = {}) const;

private:
  PoissonStructure(AlgebroidPtr source, Chart chart, std::size_t base_dim,
                   std::vector<std::vector<Expr>> lambda);

  AlgebroidPtr m_source;
  Chart m_chart;
  std::size_t m_base_dim;
  std::vector<std::vector<Expr>> m_lambda;  // full skew table over chart pairs
};

}  // namespace affalg
