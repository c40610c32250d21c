#include "affalg/validate.hpp"

#include <sstream>

#include "affalg/kform.hpp"

namespace affalg {

bool ValidationReport::all_passed() const {
  for (const auto& c : checks)
    if (c.result.state != TriState::Zero) return false;
  return true;
}

std::vector<const AxiomCheck*> ValidationReport::failures() const {
  std::vector<const AxiomCheck*> out;
  for (const auto& c : checks)
    if (c.result.state != TriState::Zero) out.push_back(&c);
  return out;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << (c.result.state == TriState::Zero ? "  [pass] " : "  [FAIL] ") << c.axiom;
    if (!c.detail.empty()) os << " (" << c.detail << ")";
    if (c.result.state != TriState::Zero) {
      os << " -> " << to_string(c.result.state);
      if (c.result.witness) {
        os << " witness:";
        for (const auto& [k, v] : c.result.witness->point) os << " " << k << "=" << v;
        os << " value=" << c.result.witness->value;
      }
    }
    os << "\n";
  }
  return os.str();
}

ValidationReport validate(const AlgebroidPtr& alg, const ZeroOptions& opts,
                          const std::optional<Expr>& exactness_probe) {
  ValidationReport report;
  const auto& chart = alg->chart();
  const std::size_t F = alg->frame_size();

  // (a) Jacobi via d^2 = 0
  for (std::size_t i = 0; i < chart.size(); ++i) {
    KForm f = KForm::function(alg, Expr::variable(chart.name(i)));
    report.checks.push_back(
        {"jacobi-d2", "coordinate " + chart.name(i), d(d(f)).all_zero(opts)});
  }
  for (std::size_t c = 0; c < F; ++c) {
    KForm e = KForm::coframe(alg, c);
    report.checks.push_back(
        {"jacobi-d2", "coframe " + alg->frame_name(c), d(d(e)).all_zero(opts)});
  }

  // (b) anchor morphism: rho([e_a,e_b])(f) - [rho(e_a), rho(e_b)](f)
  for (std::size_t a = 0; a < F; ++a) {
    for (std::size_t b = a + 1; b < F; ++b) {
      Section ea = alg->frame_section(a);
      Section eb = alg->frame_section(b);
      Section br = alg->bracket(ea, eb);
      std::vector<ZeroResult> per_coord;
      for (std::size_t i = 0; i < chart.size(); ++i) {
        Expr f = Expr::variable(chart.name(i));
        Expr lhs = alg->anchor_apply(br, f);
        Expr rhs = alg->anchor_apply(ea, alg->anchor_apply(eb, f)) -
                   alg->anchor_apply(eb, alg->anchor_apply(ea, f));
        per_coord.push_back(is_zero(lhs - rhs, opts));
      }
      report.checks.push_back(
          {"anchor-morphism",
           "[" + alg->frame_name(a) + "," + alg->frame_name(b) + "]",
           combine_zero_results(per_coord)});
    }
  }

  // (c) affine case: no e0 component in any bracket, equivalently d e^0 = 0
  if (std::dynamic_pointer_cast<const AffineAlgebroid>(alg)) {
    std::vector<ZeroResult> c0;
    for (const auto& s : alg->structure_entries())
      if (s.c == 0) c0.push_back(is_zero(s.value, opts));
    report.checks.push_back({"affine-c0", "C^0 table", combine_zero_results(c0)});
    report.checks.push_back(
        {"affine-de0", "d e^0", d(KForm::coframe(alg, 0)).all_zero(opts)});
  }

  // (d) optional e^0-exactness probe: df = e^0
  if (exactness_probe) {
    KForm df = d(KForm::function(alg, *exactness_probe));
    report.checks.push_back(
        {"e0-exactness", "df - e^0", (df - KForm::coframe(alg, 0)).all_zero(opts)});
  }

  return report;
}

std::vector<AxiomCheck> jacobi_direct(const AlgebroidPtr& alg, const ZeroOptions& opts) {
  std::vector<AxiomCheck> out;
  const std::size_t F = alg->frame_size();
  for (std::size_t a = 0; a < F; ++a) {
    for (std::size_t b = a + 1; b < F; ++b) {
      for (std::size_t c = b + 1; c < F; ++c) {
        Section ea = alg->frame_section(a);
        Section eb = alg->frame_section(b);
        Section ec = alg->frame_section(c);
        Section cyc = alg->bracket(ea, alg->bracket(eb, ec)) +
                      alg->bracket(eb, alg->bracket(ec, ea)) +
                      alg->bracket(ec, alg->bracket(ea, eb));
        std::ostringstream detail;
        detail << "(" << alg->frame_name(a) << "," << alg->frame_name(b) << ","
               << alg->frame_name(c) << ")";
        out.push_back({"jacobi-direct", detail.str(), cyc.all_zero(opts)});
      }
    }
  }
  return out;
}

}  // namespace affalg
