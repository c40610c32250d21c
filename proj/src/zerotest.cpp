#include "affalg/zerotest.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace affalg {

const char* to_string(TriState s) {
  switch (s) {
    case TriState::Zero: return "zero";
    case TriState::NonZero: return "nonzero";
    case TriState::Unknown: return "unknown";
  }
  return "?";
}

ZeroResult is_zero(const Expr& e, const ZeroOptions& opts) {
  ZeroResult res;
  Expr s = simplify(e);
  if (s.is_literal_zero()) {
    res.state = TriState::Zero;
    res.note = "structural";
    return res;
  }
  if (s.is_constant()) {
    const Number& v = s.value();
    if (v.exact() || std::abs(v.value()) > opts.tol) {
      res.state = TriState::NonZero;
      res.witness = ZeroWitness{{}, v.value()};
      res.note = "constant";
      return res;
    }
    // inexact round-off residue below tolerance
    res.state = TriState::Zero;
    res.note = "constant within tolerance";
    return res;
  }

  const std::set<std::string> fv = free_variables(s);
  std::vector<std::string> vars(fv.begin(), fv.end());
  std::mt19937_64 rng(opts.seed);
  int valid = 0;
  for (int k = 0; k < opts.samples; ++k) {
    Env env;
    std::map<std::string, double> point;
    for (const auto& v : vars) {
      auto range = opts.default_range;
      if (auto it = opts.box.find(v); it != opts.box.end()) range = it->second;
      std::uniform_real_distribution<double> dist(range.first, range.second);
      double x = dist(rng);
      env[v] = x;
      point[v] = x;
    }
    double value;
    try {
      value = eval(s, env);
    } catch (const EvalError&) {
      continue;
    }
    ++valid;
    if (std::abs(value) > opts.tol) {
      res.state = TriState::NonZero;
      res.witness = ZeroWitness{std::move(point), value};
      res.valid_samples = valid;
      res.note = "sample exceeded tolerance";
      return res;
    }
  }
  res.valid_samples = valid;
  if (valid == 0 || valid < (opts.samples + 1) / 2) {
    res.state = TriState::Unknown;
    res.note = "domain errors dominated sampling";
    return res;
  }
  res.state = TriState::Zero;
  res.note = "sampled";
  return res;
}

}  // namespace affalg
