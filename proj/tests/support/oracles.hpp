#pragma once

// Test-side oracles, independent of the library's symbolic paths.

#include <cmath>
#include <random>
#include <string>

#include "affalg/expr.hpp"

namespace testsupport {

/// Central finite difference; the independent check for symbolic derivatives.
inline double fd_partial(const affalg::Expr& e, const affalg::Env& at,
                         const std::string& var, double h = 1e-6) {
  affalg::Env lo = at, hi = at;
  lo[var] -= h;
  hi[var] += h;
  return (affalg::eval(e, hi) - affalg::eval(e, lo)) / (2.0 * h);
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

}  // namespace testsupport
