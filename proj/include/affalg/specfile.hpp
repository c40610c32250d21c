#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "affalg/algebroid.hpp"

namespace affalg {

struct SpecFileError : ExprError {
  using ExprError::ExprError;
};

/// Declarative algebroid description, the on-disk `.alg` format (JSON).
///
///   {
///     "name": "canonical_j1",
///     "base": ["t", "x"],                    // base coordinate names
///     "fiber": ["y1"],                       // fiber coordinate names y^alpha
///     "anchor": {
///       "rho0": ["1", "0"],                  // one Expr per base coordinate
///       "rho":  [["0"], ["1"]]               // rows = base coords, cols = alpha
///     },
///     "structure": {
///       "C0": {"2,1": "1"},                  // "gamma,beta" -> C^gamma_{0 beta}
///       "C":  {"3,1,2": "1"}                 // "gamma,alpha,beta", alpha < beta
///     },
///     "lagrangian": "y1^2/2 - x^2/2",        // optional, over (x, y)
///     "integrate": {                          // optional
///       "initial": {"t": 0, "x": 1, "y1": 0},
///       "t0": 0, "t1": 1, "h": 0.001,
///       "monitors": {"energy": "x^2 + y1^2"}
///     }
///   }
///
/// Indices are 1-based fiber positions (0 is the distinguished direction and
/// never appears in an index). Every expression must parse over the declared
/// chart; structure keys require alpha < beta.
struct AlgebroidSpecFile {
  struct IntegrateBlock {
    std::map<std::string, double> initial;
    double t0 = 0.0, t1 = 1.0, h = 1e-3;
    std::vector<std::pair<std::string, std::string>> monitors;  // name -> expr text
  };

  std::string name;
  std::vector<std::string> base;
  std::vector<std::string> fiber;
  std::vector<std::string> rho0;               // per base coordinate
  std::vector<std::vector<std::string>> rho;   // [base coord][alpha]
  std::map<std::string, std::string> c0;       // "gamma,beta" -> expr
  std::map<std::string, std::string> c;        // "gamma,alpha,beta" -> expr
  std::optional<std::string> lagrangian;
  std::optional<IntegrateBlock> integrate;

  static AlgebroidSpecFile load(const std::string& path);
  static AlgebroidSpecFile from_json_text(const std::string& text);

  /// Parses all expressions and constructs the algebroid; throws
  /// SpecFileError with the offending field on any problem.
  AffinePtr build() const;

  /// Parsed optional payloads (require build() to succeed first).
  std::optional<Expr> lagrangian_expr(const AffinePtr& alg) const;

  std::string to_json_text() const;
  void save(const std::string& path) const;

  /// Round-trip helper: re-serializes a built algebroid (expressions are
  /// printed back to text) keeping name, lagrangian and integrate block.
  static AlgebroidSpecFile from_algebroid(const AffinePtr& alg,
                                          const AlgebroidSpecFile& original);
};

}  // namespace affalg
