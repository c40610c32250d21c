#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affalg/algebroid.hpp"
#include "affalg/validate.hpp"
#include "support/fixtures.hpp"
#include "support/random_expr.hpp"

using namespace affalg;
using namespace testsupport;

TEST_CASE("frame brackets reproduce the structure functions") {
  auto A = affine_liealgebra_point();
  // [e0, e1] = e2
  Section br = A->bracket(A->frame_section(0), A->frame_section(1));
  CHECK(simplify(br.coefficient(0)).is_literal_zero());
  CHECK(simplify(br.coefficient(1)).is_literal_zero());
  CHECK(simplify(br.coefficient(2)).is_literal_one());
  // [e0, e2] = -e1
  Section br2 = A->bracket(A->frame_section(0), A->frame_section(2));
  CHECK(simplify(br2.coefficient(1)) == Expr::integer(-1));

  // [e0, e_beta] = C^gamma_{0 beta} e_gamma against the accessors
  auto E = euler_top();
  for (std::size_t beta = 1; beta <= E->fiber_dim(); ++beta) {
    Section b = E->bracket(E->frame_section(0), E->frame_section(beta));
    for (std::size_t gamma = 1; gamma <= E->fiber_dim(); ++gamma)
      CHECK(is_zero(b.coefficient(gamma) - E->c0(gamma, beta)).is_zero());
  }
}

TEST_CASE("bracket is skew and kills equal sections") {
  for (const auto& A : positive_fixtures()) {
    for (std::size_t a = 0; a < A->frame_size(); ++a)
      for (std::size_t b = 0; b < A->frame_size(); ++b) {
        Section s = A->bracket(A->frame_section(a), A->frame_section(b)) +
                    A->bracket(A->frame_section(b), A->frame_section(a));
        CHECK(s.all_zero().is_zero());
      }
    RandomExpr gen(A->chart().names(), 314);
    std::vector<Expr> coeff;
    for (std::size_t a = 0; a < A->frame_size(); ++a) coeff.push_back(gen.next(2));
    Section z = A->section(coeff);
    CHECK(A->bracket(z, z).all_zero().is_zero());
  }
}

TEST_CASE("canonical fixture: [e0, x*e1] vanishes because rho^x_0 = 0") {
  auto A = canonical_j1();
  Section z = A->section({Expr::zero(), Expr::variable("x")});
  Section br = A->bracket(A->frame_section(0), z);
  CHECK(br.all_zero().is_zero());
}

TEST_CASE("anchor application") {
  auto A = canonical_j1();
  // anchor_apply(e0, x^i) = rho^i_0
  CHECK(A->anchor_apply(A->frame_section(0), Expr::variable("t")).is_literal_one());
  CHECK(A->anchor_apply(A->frame_section(0), Expr::variable("x")).is_literal_zero());
  // constants die
  CHECK(A->anchor_apply(A->frame_section(1), Expr::rational(7, 3)).is_literal_zero());

  // frozen-parameter variant: anchor_apply(e0 + p*e1, x) = p
  auto P = canonical_j1_with_param();
  Section z = P->section({Expr::one(), Expr::variable("param")});
  CHECK(P->anchor_apply(z, Expr::variable("x")) == Expr::variable("param"));

  // chart mismatch is an error
  CHECK_THROWS_AS(A->anchor_apply(P->section({Expr::one(), Expr::zero()}),
                                  Expr::variable("x")),
                  AlgebroidError);
}

TEST_CASE("Leibniz compatibility: [z1, f z2] = f [z1,z2] + rho(z1)(f) z2") {
  for (const auto& A : positive_fixtures()) {
    RandomExpr gen(A->chart().names(), 2718);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<Expr> c1, c2;
      for (std::size_t a = 0; a < A->frame_size(); ++a) {
        c1.push_back(gen.next(2));
        c2.push_back(gen.next(2));
      }
      Expr f = gen.next(2);
      Section z1 = A->section(c1), z2 = A->section(c2);
      Section lhs = A->bracket(z1, z2.scaled(f));
      Section rhs = A->bracket(z1, z2).scaled(f) +
                    z2.scaled(A->anchor_apply(z1, f));
      CHECK((lhs - rhs).all_zero().is_zero());
    }
  }
}

TEST_CASE("validate: every shipped fixture passes all axioms") {
  for (const auto& A : positive_fixtures()) {
    ValidationReport r = validate(A);
    CHECK_MESSAGE(r.all_passed(), A->name(), ":\n", r.to_text());
  }
}

TEST_CASE("validate: canonical fixture with exactness probe f = t") {
  auto A = canonical_j1();
  ValidationReport r = validate(A, {}, Expr::variable("t"));
  CHECK(r.all_passed());
  bool saw_probe = false;
  for (const auto& c : r.checks)
    if (c.axiom == "e0-exactness") saw_probe = true;
  CHECK(saw_probe);
}

TEST_CASE("validate: tampered structure fails with a witness") {
  auto A = broken_jacobi();
  ValidationReport r = validate(A);
  CHECK_FALSE(r.all_passed());
  bool witness_seen = false;
  for (const auto* f : r.failures())
    if (f->result.witness) witness_seen = true;
  CHECK(witness_seen);
}

TEST_CASE("euler top satisfies Jacobi; direct triple-bracket cross-check") {
  auto E = euler_top();
  // independent oracle: expand the cyclic sum with plain epsilon arithmetic
  auto eps = [](int a, int b, int c) -> int {
    return (a - b) * (b - c) * (c - a) / 2;  // epsilon_{abc} for 1..3
  };
  for (int a = 1; a <= 3; ++a)
    for (int b = 1; b <= 3; ++b)
      for (int c = 1; c <= 3; ++c)
        for (int d = 1; d <= 3; ++d) {
          int cyc = 0;
          for (int g = 1; g <= 3; ++g)
            cyc += eps(b, c, g) * eps(a, g, d) + eps(c, a, g) * eps(b, g, d) +
                   eps(a, b, g) * eps(c, g, d);
          CHECK(cyc == 0);
        }
  for (const auto& check : jacobi_direct(E))
    CHECK_MESSAGE(check.result.is_zero(), check.axiom, " ", check.detail);
}

TEST_CASE("fiber-dependent structure entries are rejected at load time") {
  CHECK_THROWS_AS(AffineAlgebroid::make(
                      "bad", Chart::base({"x"}), {"y1"},
                      {{Expr::zero(), Expr::variable("y1")}}, {}),
                  AlgebroidError);
  CHECK_THROWS_AS(AffineAlgebroid::make(
                      "bad2", Chart::base({"x"}), {"y1"},
                      {{Expr::zero(), Expr::one()}},
                      {Entry{0, 1, 1, Expr::variable("y1")}}),
                  AlgebroidError);
}
