#pragma once

#include <map>

#include "affalg/prolong.hpp"

namespace affalg {

/// Raised when the Hessian d2L/dy2 is rank-deficient at a probe point. The
/// artifact refuses singular Lagrangians with a diagnostic; no constraint
/// algorithm is attempted.
struct SingularLagrangianError : ExprError {
  SingularLagrangianError(const std::string& what, std::map<std::string, double> at,
                          double det_value)
      : ExprError(what), point(std::move(at)), det(det_value) {}
  std::map<std::string, double> point;
  double det;
};

/// Fiberwise affine approximation of L: E -> E-dagger, with components
/// (x^i, L - y^alpha dL/dy^alpha, dL/dy^alpha).
struct LegendreMap {
  AffinePtr algebroid;
  Expr mu0;
  std::vector<Expr> mu;
};

/// Lagrangian function on E together with the prolongation it acts on.
class LagrangianSystem {
public:
  LagrangianSystem(ProlongPtr prol, Expr lagrangian);

  const Expr& lagrangian() const { return m_L; }
  const ProlongPtr& prolongation() const { return m_prol; }

  /// Theta_L = dL o S + L X^0 = dL/dy^alpha theta^alpha + L X^0.
  KForm cartan_one_form() const;
  /// Omega_L = -d Theta_L; closed by construction.
  KForm cartan_two_form() const;
  /// Omega_L re-expressed in the coframe {X^0, theta^alpha, psi^alpha}
  /// dual to {Gamma_0, X_alpha, V_alpha} for a reference pseudo-SODE with
  /// forces F0 (psi^alpha = V^alpha - F0^alpha X^0).
  KForm cartan_two_form_theta_psi(const std::vector<Expr>& f0) const;

  /// g_{alpha beta} = d2L/dy^alpha dy^beta.
  std::vector<std::vector<Expr>> hessian() const;

  /// rho^i_alpha dL/dx^i + C^gamma_alpha dL/dy^gamma - (rho^i_0 +
  /// rho^i_beta y^beta) d2L/dx^i dy^alpha, the right-hand side of g F = rhs.
  std::vector<Expr> euler_lagrange_rhs() const;

  /// Solves g F = rho^i_alpha dL/dx^i + C^gamma_alpha dL/dy^gamma -
  /// (rho^i_0 + rho^i_beta y^beta) d2L/dx^i dy^alpha. Inverts symbolically
  /// when the Hessian is velocity-independent, otherwise returns an
  /// implicit pseudo-SODE solved pointwise. Throws SingularLagrangianError
  /// when the Hessian degenerates at a probe point.
  PseudoSode derive_sode(const ZeroOptions& opts = {}) const;

  LegendreMap legendre() const;

private:
  ProlongPtr m_prol;
  Expr m_L;
};

/// The canonical geometry on the prolongation of the extended dual:
/// theta_0 = mu_0 X^0 + mu_alpha X^alpha and omega_0 = -d theta_0, over the
/// algebroid T E-dagger with frame {X_0..X_n, P_0..P_n}.
struct CanonicalForms {
  AlgebroidPtr dual_prolongation;
  KForm theta0;
  KForm omega0;
};

CanonicalForms canonical_forms(const AffinePtr& algebroid);

/// Pullback of a form on the dual prolongation through the prolonged
/// Legendre map T Phi_L: frame sections push through the component Jacobian
/// of Phi_L and mu coordinates substitute to the Legendre components.
KForm legendre_pullback(const KForm& form, const LegendreMap& fl, const ProlongPtr& prol);

}  // namespace affalg
