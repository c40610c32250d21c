#include "affalg/prolong.hpp"

#include "linsolve.hpp"

namespace affalg {

ProlongedAlgebroid::ProlongedAlgebroid(AffinePtr source, Chart chart,
                                       std::vector<std::string> frame,
                                       std::vector<std::vector<Expr>> anchor,
                                       std::vector<StructureEntry> structure)
    : VectorAlgebroid(std::move(chart), std::move(frame), std::move(anchor),
                      std::move(structure)),
      m_source(std::move(source)) {}

ProlongPtr ProlongedAlgebroid::make(AffinePtr source) {
  const std::size_t n = source->fiber_dim();
  const std::size_t dim = source->chart().size();  // base coordinates
  const Chart& e_chart = source->e_chart();        // (x, y)
  const std::size_t F = 1 + 2 * n;

  std::vector<std::string> frame;
  frame.reserve(F);
  for (std::size_t a = 0; a <= n; ++a) frame.push_back("X" + std::to_string(a));
  for (std::size_t alpha = 1; alpha <= n; ++alpha)
    frame.push_back("V" + std::to_string(alpha));

  // anchor rows over (x, y): X_a maps to rho^i_a d/dx^i, V_alpha to d/dy^alpha
  std::vector<std::vector<Expr>> anchor(e_chart.size(), std::vector<Expr>(F, Expr::zero()));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t a = 0; a <= n; ++a) anchor[i][a] = source->anchor(i, a);
  for (std::size_t alpha = 1; alpha <= n; ++alpha)
    anchor[dim + alpha - 1][n + alpha] = Expr::one();

  // brackets: [X_a, X_b] = C^c_ab X_c, V brackets vanish
  std::vector<VectorAlgebroid::StructureEntry> structure;
  for (const auto& s : source->structure_entries())
    structure.push_back({s.a, s.b, s.c, s.value});

  auto ptr = std::shared_ptr<ProlongedAlgebroid>(new ProlongedAlgebroid(
      std::move(source), e_chart, std::move(frame), std::move(anchor),
      std::move(structure)));
  ptr->check_well_formed(true);  // the sanctioned (x, y) exception
  return ptr;
}

Expr ProlongedAlgebroid::y(std::size_t alpha) const {
  return Expr::variable(m_source->fiber_coordinates().at(alpha - 1));
}

Section ProlongedAlgebroid::vertical_lift(const Section& zeta) const {
  if (zeta.algebroid() != m_source)
    throw AlgebroidError("vertical lift expects a section of the source bidual");
  const std::size_t n = fiber_dim();
  std::vector<Expr> out(frame_size(), Expr::zero());
  for (std::size_t alpha = 1; alpha <= n; ++alpha)
    out[v_index(alpha)] =
        simplify(zeta.coefficient(alpha) - y(alpha) * zeta.coefficient(0));
  return section(std::move(out));
}

Expr ProlongedAlgebroid::fdot(const Expr& f) const {
  const std::size_t n = fiber_dim();
  const std::size_t dim = m_source->chart().size();
  Expr acc = Expr::zero();
  for (std::size_t i = 0; i < dim; ++i) {
    Expr df = diff(f, m_source->chart().name(i));
    if (df.is_literal_zero()) continue;
    Expr coeff = m_source->rho0(i);
    for (std::size_t alpha = 1; alpha <= n; ++alpha)
      coeff = coeff + m_source->rho(i, alpha) * y(alpha);
    acc = acc + coeff * df;
  }
  return simplify(acc);
}

Expr ProlongedAlgebroid::c_mixed(std::size_t alpha, std::size_t beta) const {
  Expr acc = m_source->c0(alpha, beta);
  for (std::size_t gamma = 1; gamma <= fiber_dim(); ++gamma)
    acc = acc + m_source->c(alpha, gamma, beta) * y(gamma);
  return simplify(acc);
}

Section ProlongedAlgebroid::complete_lift(const Section& zeta) const {
  if (zeta.algebroid() != m_source)
    throw AlgebroidError("complete lift expects a section of the source bidual");
  const std::size_t n = fiber_dim();
  std::vector<Expr> out(frame_size(), Expr::zero());
  const Expr& z0 = zeta.coefficient(0);
  Expr z0dot = fdot(z0);
  for (std::size_t a = 0; a <= n; ++a) out[x_index(a)] = zeta.coefficient(a);
  for (std::size_t alpha = 1; alpha <= n; ++alpha) {
    Expr v = fdot(zeta.coefficient(alpha)) - y(alpha) * z0dot;
    for (std::size_t beta = 1; beta <= n; ++beta) {
      Expr theta_beta = zeta.coefficient(beta) - y(beta) * z0;
      if (simplify(theta_beta).is_literal_zero()) continue;
      v = v + c_mixed(alpha, beta) * theta_beta;
    }
    out[v_index(alpha)] = simplify(v);
  }
  return section(std::move(out));
}

Section ProlongedAlgebroid::vertical_endo(const Section& z) const {
  if (z.algebroid().get() != this)
    throw AlgebroidError("vertical endomorphism expects a prolongation section");
  std::vector<Expr> out(frame_size(), Expr::zero());
  for (std::size_t alpha = 1; alpha <= fiber_dim(); ++alpha)
    out[v_index(alpha)] =
        simplify(z.coefficient(x_index(alpha)) - y(alpha) * z.coefficient(x_index(0)));
  return section(std::move(out));
}

KForm ProlongedAlgebroid::contact_form(std::size_t alpha) const {
  KForm theta(shared_from_this(), 1);
  theta.add_term({x_index(alpha)}, Expr::one());
  theta.add_term({x_index(0)}, -y(alpha));
  return theta;
}

std::pair<Expr, KForm> ProlongedAlgebroid::split_form(const KForm& theta) const {
  if (theta.algebroid() != m_source)
    throw AlgebroidError("split expects a 1-form on the source bidual");
  if (theta.degree() != 1) throw AlgebroidError("split expects a 1-form");
  const std::size_t n = fiber_dim();
  Expr hat = theta.coefficient({0});
  KForm bar(shared_from_this(), 1);
  for (std::size_t alpha = 1; alpha <= n; ++alpha) {
    Expr t = theta.coefficient({alpha});
    hat = hat + t * y(alpha);
    if (t.is_literal_zero()) continue;
    bar.add_term({x_index(alpha)}, t);
    bar.add_term({x_index(0)}, -(t * y(alpha)));
  }
  return {simplify(hat), bar.normalized()};
}

//------------------------------------------------------------------------

PseudoSode::PseudoSode(ProlongPtr prol, std::vector<Expr> forces)
    : m_prol(std::move(prol)), m_forces(std::move(forces)) {
  if (m_forces->size() != m_prol->fiber_dim())
    throw AlgebroidError("force count does not match fiber dimension");
  const Chart& chart = m_prol->chart();
  for (const auto& f : *m_forces)
    for (const auto& v : free_variables(f))
      if (!chart.contains(v))
        throw AlgebroidError("force depends on '" + v + "', not an (x,y) coordinate");
  const auto& src = *m_prol->source();
  for (std::size_t i = 0; i < src.chart().size(); ++i) {
    Expr acc = src.rho0(i);
    for (std::size_t alpha = 1; alpha <= src.fiber_dim(); ++alpha)
      acc = acc + src.rho(i, alpha) * m_prol->y(alpha);
    m_base_field.push_back(simplify(acc));
  }
}

PseudoSode PseudoSode::implicit(ProlongPtr prol, std::vector<std::vector<Expr>> hessian,
                                std::vector<Expr> rhs) {
  const std::size_t n = prol->fiber_dim();
  PseudoSode s(std::move(prol), std::vector<Expr>(n, Expr::zero()));
  s.m_forces.reset();
  s.m_hessian = std::move(hessian);
  s.m_rhs = std::move(rhs);
  return s;
}

const std::vector<Expr>& PseudoSode::forces() const {
  if (!m_forces)
    throw AlgebroidError("forces are implicit; only pointwise evaluation is available");
  return *m_forces;
}

Section PseudoSode::as_section() const {
  const auto& p = *m_prol;
  std::vector<Expr> coeff(p.frame_size(), Expr::zero());
  coeff[p.x_index(0)] = Expr::one();
  for (std::size_t alpha = 1; alpha <= p.fiber_dim(); ++alpha) {
    coeff[p.x_index(alpha)] = p.y(alpha);
    coeff[p.v_index(alpha)] = forces()[alpha - 1];
  }
  return p.section(std::move(coeff));
}

void PseudoSode::eval_rates(const Env& state, std::vector<double>& xdot,
                            std::vector<double>& ydot) const {
  const std::size_t n = m_prol->fiber_dim();
  xdot.resize(m_base_field.size());
  ydot.resize(n);
  for (std::size_t i = 0; i < m_base_field.size(); ++i)
    xdot[i] = eval(m_base_field[i], state);
  if (m_forces) {
    for (std::size_t alpha = 0; alpha < n; ++alpha)
      ydot[alpha] = eval((*m_forces)[alpha], state);
    return;
  }
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = eval(m_rhs[i], state);
    for (std::size_t j = 0; j < n; ++j) g[i][j] = eval(m_hessian[i][j], state);
  }
  if (!detail::solve_inplace(g, b))
    throw AlgebroidError("singular force system at the current state");
  ydot = std::move(b);
}

}  // namespace affalg
