#pragma once

#include <optional>
#include <utility>

#include "affalg/algebroid.hpp"
#include "affalg/kform.hpp"

namespace affalg {

/// The prolonged algebroid over E with frame {X_0, X_1..X_n, V_1..V_n},
/// chart (x^i, y^alpha), anchor rho1(X_a) = rho^i_a d/dx^i and
/// rho1(V_alpha) = d/dy^alpha, and brackets [X_a, X_b] = C^c_ab X_c with
/// all V brackets zero. Everything the exterior calculus and validation
/// modules do applies verbatim to instances of this class.
class ProlongedAlgebroid : public VectorAlgebroid {
public:
  static std::shared_ptr<const ProlongedAlgebroid> make(AffinePtr source);

  const AffinePtr& source() const { return m_source; }
  std::size_t fiber_dim() const { return m_source->fiber_dim(); }

  /// Frame position of X_a, a = 0..n.
  std::size_t x_index(std::size_t a) const { return a; }
  /// Frame position of V_alpha, alpha = 1..n.
  std::size_t v_index(std::size_t alpha) const { return fiber_dim() + alpha; }
  /// The fiber coordinate y^alpha as an expression.
  Expr y(std::size_t alpha) const;

  /// zeta^V = (zeta^alpha - y^alpha zeta^0) V_alpha for zeta on the bidual.
  Section vertical_lift(const Section& zeta) const;
  /// zeta^C = zeta^0 X_0 + zeta^alpha X_alpha + [(zdot^alpha - y^alpha
  /// zdot^0) + C^alpha_beta (zeta^beta - y^beta zeta^0)] V_alpha.
  Section complete_lift(const Section& zeta) const;
  /// S(Z) = (Z^{X_alpha} - y^alpha Z^{X_0}) V_alpha; squares to zero.
  Section vertical_endo(const Section& z) const;

  /// theta^alpha = X^alpha - y^alpha X^0; annihilates admissible elements.
  KForm contact_form(std::size_t alpha) const;
  /// Splits (the pullback of) a 1-form theta on the bidual into the affine
  /// function theta-hat = theta_0 + theta_alpha y^alpha on E and the
  /// contact part theta-bar = theta_alpha (X^alpha - y^alpha X^0).
  std::pair<Expr, KForm> split_form(const KForm& theta) const;

  /// fdot = rho^i_0 df/dx^i + rho^i_alpha y^alpha df/dx^i, the affine
  /// function of df (x-derivatives only, as for functions on M).
  Expr fdot(const Expr& f) const;

  /// C^alpha_beta = C^alpha_{0 beta} + C^alpha_{gamma beta} y^gamma.
  Expr c_mixed(std::size_t alpha, std::size_t beta) const;

private:
  ProlongedAlgebroid(AffinePtr source, Chart chart, std::vector<std::string> frame,
                     std::vector<std::vector<Expr>> anchor,
                     std::vector<StructureEntry> structure);
  AffinePtr m_source;
};

using ProlongPtr = std::shared_ptr<const ProlongedAlgebroid>;

/// Pseudo-second-order dynamics Gamma = X_0 + y^alpha X_alpha + F^alpha
/// V_alpha. Forces are explicit expressions when the Euler-Lagrange system
/// could be solved symbolically; otherwise the Hessian/right-hand side pair
/// is kept and forces are obtained by a linear solve per evaluation point.
class PseudoSode {
public:
  PseudoSode(ProlongPtr prol, std::vector<Expr> forces);
  /// Implicit variant: g F = rhs solved numerically at each state.
  static PseudoSode implicit(ProlongPtr prol, std::vector<std::vector<Expr>> hessian,
                             std::vector<Expr> rhs);

  const ProlongPtr& prolongation() const { return m_prol; }
  bool has_explicit_forces() const { return m_forces.has_value(); }
  const std::vector<Expr>& forces() const;
  /// Gamma as a section of the prolongation (explicit forces only).
  Section as_section() const;

  /// xdot^i = rho^i_0 + rho^i_alpha y^alpha per base coordinate.
  const std::vector<Expr>& base_field() const { return m_base_field; }

  /// Evaluates (xdot, ydot) at a state; throws EvalError on domain errors
  /// and AlgebroidError when an implicit force system is singular.
  void eval_rates(const Env& state, std::vector<double>& xdot,
                  std::vector<double>& ydot) const;

private:
  ProlongPtr m_prol;
  std::optional<std::vector<Expr>> m_forces;
  std::vector<std::vector<Expr>> m_hessian;  // implicit only
  std::vector<Expr> m_rhs;                   // implicit only
  std::vector<Expr> m_base_field;
};

}  // namespace affalg
