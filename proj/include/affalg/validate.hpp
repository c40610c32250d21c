#pragma once

#include <optional>
#include <string>
#include <vector>

#include "affalg/algebroid.hpp"

namespace affalg {

struct AxiomCheck {
  std::string axiom;   // e.g. "jacobi", "anchor-morphism", "affine-c0"
  std::string detail;  // which coordinate / frame pair / triple
  ZeroResult result;
};

struct ValidationReport {
  std::vector<AxiomCheck> checks;
  bool all_passed() const;
  /// Checks whose result is not Zero.
  std::vector<const AxiomCheck*> failures() const;
  std::string to_text() const;
};

/// Runs the defining axioms with per-axiom tri-state results:
///  (a) Jacobi through d^2 = 0 on every coordinate function and coframe
///      element,
///  (b) anchor morphism on every frame pair against every coordinate,
///  (c) for affine inputs, the C^0 table is identically zero (equivalently
///      d e^0 = 0),
///  (d) optionally, an e^0-exactness probe: d f - e^0 vanishes for the
///      nominated f.
/// Failures carry a witness sample point; nothing throws.
ValidationReport validate(const AlgebroidPtr& alg, const ZeroOptions& opts = {},
                          const std::optional<Expr>& exactness_probe = std::nullopt);

/// Debug cross-check: the Jacobi identity expanded directly through triple
/// brackets on all frame triples a < b < c.
std::vector<AxiomCheck> jacobi_direct(const AlgebroidPtr& alg,
                                      const ZeroOptions& opts = {});

}  // namespace affalg
