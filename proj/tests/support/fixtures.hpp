#pragma once

// In-code builders for the worked examples: the first-jet algebroid, the
// trivial algebroid of a vector field, an affine Lie algebra over a point,
// the rigid-body (so(3)) algebra, and a deliberately broken variant.

#include <vector>

#include "affalg/algebroid.hpp"

namespace testsupport {

using affalg::AffineAlgebroid;
using affalg::AffinePtr;
using affalg::Chart;
using affalg::Expr;

using Entry = affalg::VectorAlgebroid::StructureEntry;

/// J^1 of (t,x)-space: base (t,x), fiber y1, anchor d/dt + y1 d/dx, flat.
inline AffinePtr canonical_j1() {
  return AffineAlgebroid::make(
      "canonical_j1", Chart::base({"t", "x"}), {"y1"},
      {{Expr::one(), Expr::zero()}, {Expr::zero(), Expr::one()}}, {});
}

/// Canonical fixture extended with an extra base coordinate acting as a
/// frozen parameter (zero anchor row).
inline AffinePtr canonical_j1_with_param() {
  return AffineAlgebroid::make(
      "canonical_j1_param", Chart::base({"t", "x", "param"}), {"y1"},
      {{Expr::one(), Expr::zero()},
       {Expr::zero(), Expr::one()},
       {Expr::zero(), Expr::zero()}},
      {});
}

/// M = R^2 with the rotation field X0 = -v d/du + u d/dv; 0-dim fiber.
inline AffinePtr trivial_vectorfield() {
  return AffineAlgebroid::make(
      "trivial_vectorfield", Chart::base({"u", "v"}), {},
      {{-Expr::variable("v")}, {Expr::variable("u")}}, {});
}

/// Affine Lie algebra over a point: [e0,e1] = e2, [e0,e2] = -e1.
inline AffinePtr affine_liealgebra_point() {
  return AffineAlgebroid::make(
      "affine_liealgebra_point", Chart(), {"y1", "y2"}, {},
      {Entry{0, 1, 2, Expr::one()}, Entry{0, 2, 1, Expr::integer(-1)}});
}

/// so(3) structure constants over a point base: C^gamma_{alpha beta} =
/// epsilon_{alpha beta gamma}.
inline AffinePtr euler_top() {
  return AffineAlgebroid::make(
      "euler_top", Chart(), {"y1", "y2", "y3"}, {},
      {Entry{1, 2, 3, Expr::one()}, Entry{1, 3, 2, Expr::integer(-1)},
       Entry{2, 3, 1, Expr::one()}});
}

/// Involutive affine distribution inside the jets of the (t,x) plane:
/// e1 -> d/dx, e2 -> (x^2/2) d/dx, so [e1,e2] = x e1. Structure functions
/// genuinely depend on the base point while all axioms hold.
inline AffinePtr affine_distribution() {
  Expr x = Expr::variable("x");
  return AffineAlgebroid::make(
      "affine_distribution", Chart::base({"t", "x"}), {"y1", "y2"},
      {{Expr::one(), Expr::zero(), Expr::zero()},
       {Expr::zero(), Expr::one(), Expr::rational(1, 2) * x * x}},
      {Entry{1, 2, 1, x}});
}

/// Two-fiber jet-style algebroid tampered with C^1_{12} = x1; fails Jacobi
/// and the anchor-morphism check.
inline AffinePtr broken_jacobi() {
  return AffineAlgebroid::make(
      "broken_jacobi", Chart::base({"t", "x1", "x2"}), {"y1", "y2"},
      {{Expr::one(), Expr::zero(), Expr::zero()},
       {Expr::zero(), Expr::one(), Expr::zero()},
       {Expr::zero(), Expr::zero(), Expr::one()}},
      {Entry{1, 2, 1, Expr::variable("x1")}});
}

inline std::vector<AffinePtr> positive_fixtures() {
  return {canonical_j1(), trivial_vectorfield(), affine_liealgebra_point(), euler_top(),
          affine_distribution()};
}

}  // namespace testsupport
