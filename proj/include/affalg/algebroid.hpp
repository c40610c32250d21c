#pragma once

#include <memory>
#include <string>
#include <vector>

#include "affalg/expr.hpp"
#include "affalg/zerotest.hpp"

namespace affalg {

struct AlgebroidError : ExprError {
  using ExprError::ExprError;
};

class VectorAlgebroid;
class Section;
using AlgebroidPtr = std::shared_ptr<const VectorAlgebroid>;

/// Lie algebroid over a chart in a fixed frame: anchor components
/// rho^i_a(x) and structure functions C^c_ab(x) stored for a < b only, so
/// skew-symmetry holds by convention. The defining axioms (Jacobi, anchor
/// morphism) are checked by validate(), not at construction, so that broken
/// inputs can be loaded and diagnosed.
class VectorAlgebroid : public std::enable_shared_from_this<VectorAlgebroid> {
public:
  struct StructureEntry {
    std::size_t a, b, c;  // [e_a, e_b] has coefficient value on e_c, a < b
    Expr value;
  };

  /// Builds and checks well-formedness: matrix shapes, index ranges, and
  /// that anchor/structure entries depend only on base coordinates (all
  /// chart coordinates when full_chart_coefficients is set, as for
  /// prolongations).
  static AlgebroidPtr make(Chart chart, std::vector<std::string> frame,
                           std::vector<std::vector<Expr>> anchor,
                           std::vector<StructureEntry> structure,
                           bool full_chart_coefficients = false);

  virtual ~VectorAlgebroid() = default;

  const Chart& chart() const { return m_chart; }
  std::size_t frame_size() const { return m_frame.size(); }
  const std::vector<std::string>& frame_names() const { return m_frame; }
  const std::string& frame_name(std::size_t a) const { return m_frame.at(a); }

  /// rho^{coord}_a as an Expr over the chart.
  const Expr& anchor(std::size_t coord, std::size_t a) const;
  /// C^c_{ab} with sign handling for any index order; zero when a == b.
  Expr structure(std::size_t a, std::size_t b, std::size_t c) const;
  const std::vector<StructureEntry>& structure_entries() const { return m_structure; }

  Section frame_section(std::size_t a) const;
  Section section(std::vector<Expr> coefficients) const;
  Section zero_section() const;

  /// rho~(zeta)(f) = zeta^a rho^i_a df/dz^i.
  Expr anchor_apply(const Section& zeta, const Expr& f) const;
  /// Leibniz/bilinear extension of the frame brackets.
  Section bracket(const Section& zeta1, const Section& zeta2) const;

protected:
  VectorAlgebroid(Chart chart, std::vector<std::string> frame,
                  std::vector<std::vector<Expr>> anchor,
                  std::vector<StructureEntry> structure);
  void check_well_formed(bool full_chart_coefficients) const;

  Chart m_chart;
  std::vector<std::string> m_frame;
  std::vector<std::vector<Expr>> m_anchor;  // [chart coord][frame]
  std::vector<StructureEntry> m_structure;  // a < b entries only
};

/// Frame-coefficient vector over the owning algebroid's chart.
class Section {
public:
  Section(AlgebroidPtr alg, std::vector<Expr> coeff);

  const AlgebroidPtr& algebroid() const { return m_alg; }
  std::size_t size() const { return m_coeff.size(); }
  const Expr& coefficient(std::size_t a) const { return m_coeff.at(a); }
  const std::vector<Expr>& coefficients() const { return m_coeff; }

  Section simplified() const;
  /// Zero iff every coefficient tests Zero; NonZero propagates a witness.
  ZeroResult all_zero(const ZeroOptions& opts = {}) const;

  friend Section operator+(const Section& a, const Section& b);
  friend Section operator-(const Section& a, const Section& b);
  Section scaled(const Expr& f) const;

  std::string str() const;

private:
  AlgebroidPtr m_alg;
  std::vector<Expr> m_coeff;
};

/// Merges per-component zero tests: any NonZero wins (with its witness),
/// else any Unknown, else Zero.
ZeroResult combine_zero_results(const std::vector<ZeroResult>& results);

/// Bidual-frame algebroid with distinguished index 0 and named fiber
/// coordinates y^alpha on the underlying affine bundle E. Provides the
/// split coordinate data rho^i_0, rho^i_alpha, C^gamma_{0 beta},
/// C^gamma_{alpha beta}.
class AffineAlgebroid : public VectorAlgebroid {
public:
  static std::shared_ptr<const AffineAlgebroid> make(
      std::string name, Chart base_chart, std::vector<std::string> fiber_coords,
      std::vector<std::vector<Expr>> anchor, std::vector<StructureEntry> structure);

  const std::string& name() const { return m_name; }
  std::size_t fiber_dim() const { return m_fiber_coords.size(); }
  const std::vector<std::string>& fiber_coordinates() const { return m_fiber_coords; }

  const Expr& rho0(std::size_t i) const { return anchor(i, 0); }
  const Expr& rho(std::size_t i, std::size_t alpha) const { return anchor(i, alpha); }
  Expr c0(std::size_t gamma, std::size_t beta) const { return structure(0, beta, gamma); }
  Expr c(std::size_t gamma, std::size_t alpha, std::size_t beta) const {
    return structure(alpha, beta, gamma);
  }

  /// Chart of the manifold E: base coordinates then fiber coordinates.
  const Chart& e_chart() const { return m_e_chart; }

private:
  AffineAlgebroid(std::string name, Chart chart, std::vector<std::string> frame,
                  std::vector<std::vector<Expr>> anchor,
                  std::vector<StructureEntry> structure,
                  std::vector<std::string> fiber_coords, Chart e_chart);

  std::string m_name;
  std::vector<std::string> m_fiber_coords;
  Chart m_e_chart;
};

using AffinePtr = std::shared_ptr<const AffineAlgebroid>;

}  // namespace affalg
