#include "affalg/lagrangian.hpp"

#include <random>
#include <sstream>

#include "linsolve.hpp"

namespace affalg {

LagrangianSystem::LagrangianSystem(ProlongPtr prol, Expr lagrangian)
    : m_prol(std::move(prol)), m_L(std::move(lagrangian)) {
  const Chart& chart = m_prol->chart();
  for (const auto& v : free_variables(m_L))
    if (!chart.contains(v))
      throw AlgebroidError("Lagrangian depends on '" + v +
                           "', which is not an (x,y) coordinate");
}

KForm LagrangianSystem::cartan_one_form() const {
  const auto& p = *m_prol;
  KForm theta(m_prol, 1);
  theta.add_term({p.x_index(0)}, m_L);
  for (std::size_t alpha = 1; alpha <= p.fiber_dim(); ++alpha) {
    Expr dLdy = diff(m_L, p.source()->fiber_coordinates()[alpha - 1]);
    if (dLdy.is_literal_zero()) continue;
    theta.add_term({p.x_index(alpha)}, dLdy);
    theta.add_term({p.x_index(0)}, -(dLdy * p.y(alpha)));
  }
  return theta.normalized();
}

KForm LagrangianSystem::cartan_two_form() const {
  return d(cartan_one_form()).scaled(Expr::integer(-1)).normalized();
}

KForm LagrangianSystem::cartan_two_form_theta_psi(const std::vector<Expr>& f0) const {
  const auto& p = *m_prol;
  const std::size_t n = p.fiber_dim();
  if (f0.size() != n) throw AlgebroidError("reference force count mismatch");
  // old coframe in terms of the new one:
  //   X^0 = eps^0, X^alpha = theta^alpha + y^alpha eps^0,
  //   V^alpha = psi^alpha + F0^alpha eps^0
  const std::size_t F = p.frame_size();
  std::vector<std::vector<Expr>> m(F, std::vector<Expr>(F, Expr::zero()));
  m[p.x_index(0)][p.x_index(0)] = Expr::one();
  for (std::size_t alpha = 1; alpha <= n; ++alpha) {
    m[p.x_index(alpha)][p.x_index(alpha)] = Expr::one();
    m[p.x_index(alpha)][p.x_index(0)] = p.y(alpha);
    m[p.v_index(alpha)][p.v_index(alpha)] = Expr::one();
    m[p.v_index(alpha)][p.x_index(0)] = f0[alpha - 1];
  }
  return cartan_two_form().reexpress(m);
}

std::vector<std::vector<Expr>> LagrangianSystem::hessian() const {
  const auto& ys = m_prol->source()->fiber_coordinates();
  const std::size_t n = ys.size();
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr::zero()));
  for (std::size_t a = 0; a < n; ++a) {
    Expr da = diff(m_L, ys[a]);
    for (std::size_t b = 0; b < n; ++b) g[a][b] = diff(da, ys[b]);
  }
  return g;
}

std::vector<Expr> LagrangianSystem::euler_lagrange_rhs() const {
  const auto& p = *m_prol;
  const auto& src = *p.source();
  const auto& ys = src.fiber_coordinates();
  const std::size_t n = ys.size();
  const std::size_t dim = src.chart().size();
  std::vector<Expr> rhs(n, Expr::zero());
  for (std::size_t alpha = 1; alpha <= n; ++alpha) {
    Expr acc = Expr::zero();
    // rho^i_alpha dL/dx^i
    for (std::size_t i = 0; i < dim; ++i)
      acc = acc + src.rho(i, alpha) * diff(m_L, src.chart().name(i));
    // C^gamma_alpha dL/dy^gamma
    for (std::size_t gamma = 1; gamma <= n; ++gamma)
      acc = acc + p.c_mixed(gamma, alpha) * diff(m_L, ys[gamma - 1]);
    // -(rho^i_0 + rho^i_beta y^beta) d2L/dx^i dy^alpha
    for (std::size_t i = 0; i < dim; ++i) {
      Expr mixed = diff(diff(m_L, ys[alpha - 1]), src.chart().name(i));
      if (mixed.is_literal_zero()) continue;
      Expr coeff = src.rho0(i);
      for (std::size_t beta = 1; beta <= n; ++beta)
        coeff = coeff + src.rho(i, beta) * p.y(beta);
      acc = acc - coeff * mixed;
    }
    rhs[alpha - 1] = simplify(acc);
  }
  return rhs;
}

namespace {

// Cofactor-expansion determinant; frames here are small.
Expr symbolic_det(const std::vector<std::vector<Expr>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return Expr::one();
  if (n == 1) return m[0][0];
  Expr acc = Expr::zero();
  for (std::size_t j = 0; j < n; ++j) {
    if (m[0][j].is_literal_zero()) continue;
    std::vector<std::vector<Expr>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Expr> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(m[r][c]);
      minor.push_back(std::move(row));
    }
    Expr term = m[0][j] * symbolic_det(minor);
    acc = (j % 2 == 0) ? acc + term : acc - term;
  }
  return simplify(acc);
}

Expr cofactor(const std::vector<std::vector<Expr>>& m, std::size_t i, std::size_t j) {
  std::vector<std::vector<Expr>> minor;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (r == i) continue;
    std::vector<Expr> row;
    for (std::size_t c = 0; c < m.size(); ++c)
      if (c != j) row.push_back(m[r][c]);
    minor.push_back(std::move(row));
  }
  Expr d = symbolic_det(minor);
  return ((i + j) % 2 == 0) ? d : simplify(-d);
}

}  // namespace

PseudoSode LagrangianSystem::derive_sode(const ZeroOptions& opts) const {
  const auto& p = *m_prol;
  const auto& ys = p.source()->fiber_coordinates();
  const std::size_t n = ys.size();
  std::vector<std::vector<Expr>> g = hessian();
  std::vector<Expr> rhs = euler_lagrange_rhs();

  // regularity probe: sampled |det g| must stay above threshold
  {
    std::set<std::string> vars;
    for (const auto& row : g)
      for (const auto& e : row) collect_variables(e, vars);
    std::mt19937_64 rng(opts.seed);
    for (int k = 0; k < 25; ++k) {
      Env env;
      std::map<std::string, double> point;
      for (const auto& v : vars) {
        auto range = opts.default_range;
        if (auto it = opts.box.find(v); it != opts.box.end()) range = it->second;
        std::uniform_real_distribution<double> dist(range.first, range.second);
        env[v] = dist(rng);
        point[v] = env[v];
      }
      std::vector<std::vector<double>> gnum(n, std::vector<double>(n, 0.0));
      bool evaluated = true;
      for (std::size_t i = 0; i < n && evaluated; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          try {
            gnum[i][j] = eval(g[i][j], env);
          } catch (const EvalError&) {
            evaluated = false;
            break;
          }
        }
      if (!evaluated) continue;
      double det = detail::determinant(gnum);
      if (std::abs(det) <= 1e-10) {
        std::ostringstream os;
        os << "singular Lagrangian: |det g| = " << std::abs(det)
           << " at a probe point";
        throw SingularLagrangianError(os.str(), point, det);
      }
      if (vars.empty()) break;  // constant Hessian needs one probe only
    }
  }

  // symbolic inversion when the Hessian is velocity-independent
  bool y_free = true;
  for (const auto& row : g)
    for (const auto& e : row)
      for (const auto& yname : ys)
        if (depends_on(e, yname)) y_free = false;

  if (y_free) {
    Expr det = symbolic_det(g);
    if (det.is_literal_zero())
      throw SingularLagrangianError("singular Lagrangian: det g vanishes identically",
                                    {}, 0.0);
    std::vector<Expr> forces(n, Expr::zero());
    for (std::size_t alpha = 0; alpha < n; ++alpha) {
      Expr acc = Expr::zero();
      for (std::size_t beta = 0; beta < n; ++beta) {
        // inv = cof^T / det
        Expr c = cofactor(g, beta, alpha);
        if (c.is_literal_zero()) continue;
        acc = acc + c * rhs[beta];
      }
      forces[alpha] = simplify(Expr::quotient(acc, det));
    }
    return PseudoSode(m_prol, std::move(forces));
  }
  return PseudoSode::implicit(m_prol, std::move(g), std::move(rhs));
}

LegendreMap LagrangianSystem::legendre() const {
  const auto& src = m_prol->source();
  const auto& ys = src->fiber_coordinates();
  LegendreMap fl;
  fl.algebroid = src;
  Expr mu0 = m_L;
  for (std::size_t alpha = 0; alpha < ys.size(); ++alpha) {
    Expr dLdy = diff(m_L, ys[alpha]);
    fl.mu.push_back(dLdy);
    mu0 = mu0 - Expr::variable(ys[alpha]) * dLdy;
  }
  fl.mu0 = simplify(mu0);
  return fl;
}

//------------------------------------------------------------------------

CanonicalForms canonical_forms(const AffinePtr& algebroid) {
  const std::size_t n = algebroid->fiber_dim();
  const std::size_t dim = algebroid->chart().size();
  const std::size_t F = 2 * (n + 1);

  Chart chart = algebroid->chart();
  std::vector<std::string> mu_names;
  for (std::size_t a = 0; a <= n; ++a) {
    std::string mu = "mu" + std::to_string(a);
    if (chart.contains(mu))
      throw AlgebroidError("base coordinate collides with dual coordinate '" + mu + "'");
    chart.add(mu, Chart::Role::DualFiber);
    mu_names.push_back(std::move(mu));
  }

  std::vector<std::string> frame;
  for (std::size_t a = 0; a <= n; ++a) frame.push_back("X" + std::to_string(a));
  for (std::size_t a = 0; a <= n; ++a) frame.push_back("P" + std::to_string(a));

  std::vector<std::vector<Expr>> anchor(chart.size(), std::vector<Expr>(F, Expr::zero()));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t a = 0; a <= n; ++a) anchor[i][a] = algebroid->anchor(i, a);
  for (std::size_t a = 0; a <= n; ++a) anchor[dim + a][n + 1 + a] = Expr::one();

  std::vector<VectorAlgebroid::StructureEntry> structure;
  for (const auto& s : algebroid->structure_entries())
    structure.push_back({s.a, s.b, s.c, s.value});

  AlgebroidPtr dual_prol =
      VectorAlgebroid::make(chart, frame, anchor, structure, true);

  KForm theta0(dual_prol, 1);
  for (std::size_t a = 0; a <= n; ++a)
    theta0.add_term({a}, Expr::variable(mu_names[a]));
  theta0 = theta0.normalized();
  KForm omega0 = d(theta0).scaled(Expr::integer(-1)).normalized();
  return {dual_prol, theta0, omega0};
}

KForm legendre_pullback(const KForm& form, const LegendreMap& fl, const ProlongPtr& prol) {
  const auto& dual_prol = form.algebroid();
  const std::size_t n = prol->fiber_dim();
  const std::size_t dim = prol->source()->chart().size();
  if (dual_prol->frame_size() != 2 * (n + 1))
    throw AlgebroidError("form does not live on the dual prolongation");

  // mu_a -> Phi_a substitution for the coefficients
  std::unordered_map<std::string, Expr> repl;
  std::vector<Expr> phi;  // Phi_0, Phi_1..Phi_n over (x, y)
  phi.push_back(fl.mu0);
  for (const auto& m : fl.mu) phi.push_back(m);
  for (std::size_t a = 0; a <= n; ++a)
    repl.emplace(dual_prol->chart().name(dim + a), phi[a]);

  // pulled-back coframe: X^a maps to the matching prolongation coframe;
  // P^a pulls back to d(Phi_a) on the prolongation
  std::vector<KForm> pb;
  pb.reserve(2 * (n + 1));
  for (std::size_t a = 0; a <= n; ++a) pb.push_back(KForm::coframe(prol, a));
  for (std::size_t a = 0; a <= n; ++a)
    pb.push_back(d(KForm::function(prol, phi[a])));

  KForm out(prol, form.degree());
  for (const auto& [idx, c] : form.coefficients()) {
    KForm term = KForm::function(prol, simplify(substitute(c, repl)));
    for (std::size_t p = 0; p < idx.size(); ++p) term = wedge(term, pb[idx[p]]);
    out = out + term;
  }
  return out.normalized();
}

}  // namespace affalg
