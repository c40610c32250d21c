#include "affalg/algebroid.hpp"

#include <sstream>

namespace affalg {

VectorAlgebroid::VectorAlgebroid(Chart chart, std::vector<std::string> frame,
                                 std::vector<std::vector<Expr>> anchor,
                                 std::vector<StructureEntry> structure)
    : m_chart(std::move(chart)),
      m_frame(std::move(frame)),
      m_anchor(std::move(anchor)),
      m_structure(std::move(structure)) {}

void VectorAlgebroid::check_well_formed(bool full_chart_coefficients) const {
  const std::size_t dim = m_chart.size();
  const std::size_t F = m_frame.size();
  if (F == 0) throw AlgebroidError("empty frame");
  if (m_anchor.size() != dim)
    throw AlgebroidError("anchor row count does not match chart dimension");
  for (const auto& row : m_anchor)
    if (row.size() != F)
      throw AlgebroidError("anchor column count does not match frame size");

  std::vector<std::string> allowed =
      full_chart_coefficients ? m_chart.names()
                              : m_chart.names_with_role(Chart::Role::Base);
  auto check_vars = [&](const Expr& e, const char* what) {
    for (const auto& v : free_variables(e)) {
      bool ok = false;
      for (const auto& n : allowed)
        if (n == v) {
          ok = true;
          break;
        }
      if (!ok)
        throw AlgebroidError(std::string(what) + " depends on '" + v +
                             "', which is not a base coordinate");
    }
  };
  for (const auto& row : m_anchor)
    for (const auto& e : row) check_vars(e, "anchor entry");
  for (const auto& s : m_structure) {
    if (s.a >= s.b) throw AlgebroidError("structure entries must have a < b");
    if (s.b >= F || s.c >= F) throw AlgebroidError("structure index out of range");
    check_vars(s.value, "structure function");
  }
}

AlgebroidPtr VectorAlgebroid::make(Chart chart, std::vector<std::string> frame,
                                   std::vector<std::vector<Expr>> anchor,
                                   std::vector<StructureEntry> structure,
                                   bool full_chart_coefficients) {
  auto ptr = std::shared_ptr<VectorAlgebroid>(
      new VectorAlgebroid(std::move(chart), std::move(frame), std::move(anchor),
                          std::move(structure)));
  ptr->check_well_formed(full_chart_coefficients);
  return ptr;
}

const Expr& VectorAlgebroid::anchor(std::size_t coord, std::size_t a) const {
  return m_anchor.at(coord).at(a);
}

Expr VectorAlgebroid::structure(std::size_t a, std::size_t b, std::size_t c) const {
  if (a == b) return Expr::zero();
  bool flip = a > b;
  if (flip) std::swap(a, b);
  for (const auto& s : m_structure)
    if (s.a == a && s.b == b && s.c == c) return flip ? simplify(-s.value) : s.value;
  return Expr::zero();
}

Section VectorAlgebroid::frame_section(std::size_t a) const {
  std::vector<Expr> coeff(frame_size(), Expr::zero());
  coeff.at(a) = Expr::one();
  return Section(shared_from_this(), std::move(coeff));
}

Section VectorAlgebroid::section(std::vector<Expr> coefficients) const {
  return Section(shared_from_this(), std::move(coefficients));
}

Section VectorAlgebroid::zero_section() const {
  return Section(shared_from_this(), std::vector<Expr>(frame_size(), Expr::zero()));
}

Expr VectorAlgebroid::anchor_apply(const Section& zeta, const Expr& f) const {
  if (zeta.algebroid().get() != this)
    throw AlgebroidError("section belongs to a different algebroid");
  for (const auto& v : free_variables(f))
    if (!m_chart.contains(v))
      throw AlgebroidError("function depends on '" + v +
                           "', which is not a chart coordinate");
  Expr acc = Expr::zero();
  for (std::size_t i = 0; i < m_chart.size(); ++i) {
    Expr df = diff(f, m_chart.name(i));
    if (df.is_literal_zero()) continue;
    for (std::size_t a = 0; a < frame_size(); ++a) {
      const Expr& rho = anchor(i, a);
      if (rho.is_literal_zero() || zeta.coefficient(a).is_literal_zero()) continue;
      acc = acc + zeta.coefficient(a) * rho * df;
    }
  }
  return simplify(acc);
}

Section VectorAlgebroid::bracket(const Section& z1, const Section& z2) const {
  if (z1.algebroid().get() != this || z2.algebroid().get() != this)
    throw AlgebroidError("bracket of sections from different algebroids");
  const std::size_t F = frame_size();
  std::vector<Expr> out(F, Expr::zero());
  // derivative part: rho~(z1)(z2^c) - rho~(z2)(z1^c)
  for (std::size_t c = 0; c < F; ++c) {
    Expr term = anchor_apply(z1, z2.coefficient(c)) - anchor_apply(z2, z1.coefficient(c));
    out[c] = out[c] + term;
  }
  // structure part: z1^a z2^b C^c_ab summed over stored a<b entries and both orders
  for (const auto& s : m_structure) {
    Expr mixed = z1.coefficient(s.a) * z2.coefficient(s.b) -
                 z1.coefficient(s.b) * z2.coefficient(s.a);
    if (mixed.is_literal_zero()) continue;
    out[s.c] = out[s.c] + mixed * s.value;
  }
  for (auto& e : out) e = simplify(e);
  return Section(shared_from_this(), std::move(out));
}

//------------------------------------------------------------------------

Section::Section(AlgebroidPtr alg, std::vector<Expr> coeff)
    : m_alg(std::move(alg)), m_coeff(std::move(coeff)) {
  if (!m_alg) throw AlgebroidError("section without an owning algebroid");
  if (m_coeff.size() != m_alg->frame_size())
    throw AlgebroidError("section coefficient count does not match frame size");
  for (const auto& e : m_coeff)
    for (const auto& v : free_variables(e))
      if (!m_alg->chart().contains(v))
        throw AlgebroidError("section coefficient depends on '" + v +
                             "', which is not a chart coordinate");
}

Section Section::simplified() const {
  std::vector<Expr> out;
  out.reserve(m_coeff.size());
  for (const auto& e : m_coeff) out.push_back(simplify(e));
  return Section(m_alg, std::move(out));
}

ZeroResult combine_zero_results(const std::vector<ZeroResult>& results) {
  ZeroResult combined;
  combined.state = TriState::Zero;
  combined.note = "all components";
  for (const auto& r : results) {
    if (r.state == TriState::NonZero) return r;
    if (r.state == TriState::Unknown) combined.state = TriState::Unknown;
  }
  return combined;
}

ZeroResult Section::all_zero(const ZeroOptions& opts) const {
  std::vector<ZeroResult> results;
  results.reserve(m_coeff.size());
  for (const auto& e : m_coeff) results.push_back(is_zero(e, opts));
  return combine_zero_results(results);
}

Section operator+(const Section& a, const Section& b) {
  if (a.m_alg != b.m_alg) throw AlgebroidError("sections from different algebroids");
  std::vector<Expr> out;
  out.reserve(a.m_coeff.size());
  for (std::size_t i = 0; i < a.m_coeff.size(); ++i)
    out.push_back(a.m_coeff[i] + b.m_coeff[i]);
  return Section(a.m_alg, std::move(out));
}

Section operator-(const Section& a, const Section& b) {
  if (a.m_alg != b.m_alg) throw AlgebroidError("sections from different algebroids");
  std::vector<Expr> out;
  out.reserve(a.m_coeff.size());
  for (std::size_t i = 0; i < a.m_coeff.size(); ++i)
    out.push_back(a.m_coeff[i] - b.m_coeff[i]);
  return Section(a.m_alg, std::move(out));
}

Section Section::scaled(const Expr& f) const {
  std::vector<Expr> out;
  out.reserve(m_coeff.size());
  for (const auto& e : m_coeff) out.push_back(f * e);
  return Section(m_alg, std::move(out));
}

std::string Section::str() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t a = 0; a < m_coeff.size(); ++a) {
    Expr c = simplify(m_coeff[a]);
    if (c.is_literal_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (c.is_literal_one())
      os << m_alg->frame_name(a);
    else
      os << "(" << c << ")*" << m_alg->frame_name(a);
  }
  if (first) os << "0";
  return os.str();
}

//------------------------------------------------------------------------

AffineAlgebroid::AffineAlgebroid(std::string name, Chart chart,
                                 std::vector<std::string> frame,
                                 std::vector<std::vector<Expr>> anchor,
                                 std::vector<StructureEntry> structure,
                                 std::vector<std::string> fiber_coords, Chart e_chart)
    : VectorAlgebroid(std::move(chart), std::move(frame), std::move(anchor),
                      std::move(structure)),
      m_name(std::move(name)),
      m_fiber_coords(std::move(fiber_coords)),
      m_e_chart(std::move(e_chart)) {}

std::shared_ptr<const AffineAlgebroid> AffineAlgebroid::make(
    std::string name, Chart base_chart, std::vector<std::string> fiber_coords,
    std::vector<std::vector<Expr>> anchor, std::vector<StructureEntry> structure) {
  const std::size_t n = fiber_coords.size();
  std::vector<std::string> frame;
  frame.reserve(n + 1);
  for (std::size_t a = 0; a <= n; ++a) frame.push_back("e" + std::to_string(a));

  Chart e_chart = base_chart;
  for (const auto& y : fiber_coords) e_chart.add(y, Chart::Role::Fiber);

  auto ptr = std::shared_ptr<AffineAlgebroid>(new AffineAlgebroid(
      std::move(name), std::move(base_chart), std::move(frame), std::move(anchor),
      std::move(structure), std::move(fiber_coords), std::move(e_chart)));
  ptr->check_well_formed(false);
  return ptr;
}

}  // namespace affalg
