#include "affalg/poisson.hpp"

#include <sstream>

namespace affalg {

PoissonStructure::PoissonStructure(AlgebroidPtr source, Chart chart,
                                   std::size_t base_dim,
                                   std::vector<std::vector<Expr>> lambda)
    : m_source(std::move(source)),
      m_chart(std::move(chart)),
      m_base_dim(base_dim),
      m_lambda(std::move(lambda)) {}

PoissonStructure PoissonStructure::from(const AlgebroidPtr& bidual) {
  const Chart& base = bidual->chart();
  const std::size_t dim = base.size();
  const std::size_t F = bidual->frame_size();

  Chart chart = base;
  std::vector<std::string> mu_names;
  for (std::size_t a = 0; a < F; ++a) {
    std::string mu = "mu" + std::to_string(a);
    if (base.contains(mu))
      throw AlgebroidError("base coordinate '" + mu +
                           "' collides with a dual fiber coordinate name");
    chart.add(mu, Chart::Role::DualFiber);
    mu_names.push_back(std::move(mu));
  }

  const std::size_t m = chart.size();
  std::vector<std::vector<Expr>> lambda(m, std::vector<Expr>(m, Expr::zero()));
  // {mu_a, x^i} = rho^i_a
  for (std::size_t a = 0; a < F; ++a) {
    for (std::size_t i = 0; i < dim; ++i) {
      Expr rho = bidual->anchor(i, a);
      lambda[dim + a][i] = rho;
      lambda[i][dim + a] = simplify(-rho);
    }
  }
  // {mu_a, mu_b} = C^c_ab mu_c
  for (std::size_t a = 0; a < F; ++a) {
    for (std::size_t b = a + 1; b < F; ++b) {
      Expr acc = Expr::zero();
      for (std::size_t c = 0; c < F; ++c) {
        Expr C = bidual->structure(a, b, c);
        if (C.is_literal_zero()) continue;
        acc = acc + C * Expr::variable(mu_names[c]);
      }
      acc = simplify(acc);
      lambda[dim + a][dim + b] = acc;
      lambda[dim + b][dim + a] = simplify(-acc);
    }
  }
  return PoissonStructure(bidual, std::move(chart), dim, std::move(lambda));
}

const Expr& PoissonStructure::component(std::size_t a, std::size_t b) const {
  return m_lambda.at(a).at(b);
}

Expr PoissonStructure::bracket(const Expr& f, const Expr& g) const {
  for (const auto& v : free_variables(f))
    if (!m_chart.contains(v))
      throw AlgebroidError("bracket argument depends on '" + v +
                           "', not a dual chart coordinate");
  for (const auto& v : free_variables(g))
    if (!m_chart.contains(v))
      throw AlgebroidError("bracket argument depends on '" + v +
                           "', not a dual chart coordinate");
  const std::size_t m = m_chart.size();
  std::vector<Expr> df(m), dg(m);
  for (std::size_t i = 0; i < m; ++i) {
    df[i] = diff(f, m_chart.name(i));
    dg[i] = diff(g, m_chart.name(i));
  }
  Expr acc = Expr::zero();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      const Expr& lab = m_lambda[a][b];
      if (lab.is_literal_zero()) continue;
      Expr mixed = df[a] * dg[b] - df[b] * dg[a];
      if (mixed.is_literal_zero()) continue;
      acc = acc + lab * mixed;
    }
  }
  return simplify(acc);
}

Expr PoissonStructure::linear_function_of(const Section& zeta) const {
  if (zeta.algebroid() != m_source)
    throw AlgebroidError("section does not belong to the source algebroid");
  Expr acc = Expr::zero();
  for (std::size_t a = 0; a < m_source->frame_size(); ++a)
    acc = acc + zeta.coefficient(a) * Expr::variable(m_chart.name(mu_index(a)));
  return simplify(acc);
}

std::vector<AxiomCheck> PoissonStructure::check_jacobi(const ZeroOptions& opts) const {
  std::vector<AxiomCheck> out;
  const std::size_t m = m_chart.size();
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      for (std::size_t c = b + 1; c < m; ++c) {
        Expr za = Expr::variable(m_chart.name(a));
        Expr zb = Expr::variable(m_chart.name(b));
        Expr zc = Expr::variable(m_chart.name(c));
        Expr cyc = bracket(za, bracket(zb, zc)) + bracket(zb, bracket(zc, za)) +
                   bracket(zc, bracket(za, zb));
        std::ostringstream detail;
        detail << "(" << m_chart.name(a) << "," << m_chart.name(b) << ","
               << m_chart.name(c) << ")";
        out.push_back({"poisson-jacobi", detail.str(), is_zero(cyc, opts)});
      }
    }
  }
  return out;
}

AxiomCheck PoissonStructure::check_mu0_independence(const ZeroOptions& opts) const {
  const std::string& mu0 = m_chart.name(mu_index(0));
  std::vector<ZeroResult> results;
  const std::size_t m = m_chart.size();
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b)
      results.push_back(is_zero(diff(m_lambda[a][b], mu0), opts));
  return {"poisson-mu0-symmetry", "dLambda/dmu0", combine_zero_results(results)};
}

}  // namespace affalg
