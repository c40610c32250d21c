#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "affalg/expr.hpp"

namespace affalg {

enum class TriState { Zero, NonZero, Unknown };

const char* to_string(TriState s);

/// Sampling policy for probabilistic zero-testing. Identity checks across
/// the library route through these options; a fixed seed makes every run
/// reproducible.
struct ZeroOptions {
  int samples = 25;
  double tol = 1e-9;
  std::uint64_t seed = 0x5eed;
  std::pair<double, double> default_range{-1.0, 1.0};
  std::map<std::string, std::pair<double, double>> box;  // per-variable override

  ZeroOptions with_seed(std::uint64_t s) const {
    ZeroOptions o = *this;
    o.seed = s;
    return o;
  }
};

struct ZeroWitness {
  std::map<std::string, double> point;
  double value = 0.0;
};

struct ZeroResult {
  TriState state = TriState::Unknown;
  std::optional<ZeroWitness> witness;  // set when state == NonZero
  int valid_samples = 0;
  std::string note;

  bool is_zero() const { return state == TriState::Zero; }
};

/// Tri-state zero test: structural simplification first, then seeded
/// sampling on the domain box. Zero when simplification reaches the literal
/// 0 or every sample stays within tol; NonZero on a provably nonzero
/// constant or any exceeding sample (with witness); Unknown when sampling
/// is riddled with domain errors.
ZeroResult is_zero(const Expr& e, const ZeroOptions& opts = {});

}  // namespace affalg
