#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace affalg {

/// Ordered list of coordinate names with a role tag per coordinate. The
/// position of a name is its index for the lifetime of the chart; all tensor
/// index conventions (i, alpha) refer to these positions.
class Chart {
public:
  enum class Role { Base, Fiber, DualFiber };

  Chart() = default;

  /// Appends a coordinate. Throws ExprError on duplicate, malformed or
  /// reserved (function) names.
  void add(const std::string& name, Role role);

  static Chart base(const std::vector<std::string>& names);

  std::size_t size() const { return m_names.size(); }
  const std::string& name(std::size_t i) const { return m_names.at(i); }
  Role role(std::size_t i) const { return m_roles.at(i); }
  const std::vector<std::string>& names() const { return m_names; }

  std::optional<std::size_t> index(std::string_view name) const;
  bool contains(std::string_view name) const { return index(name).has_value(); }
  std::vector<std::string> names_with_role(Role role) const;

  friend bool operator==(const Chart& a, const Chart& b) = default;

private:
  std::vector<std::string> m_names;
  std::vector<Role> m_roles;
};

/// True for the six built-in function names (sin, cos, ...), which cannot be
/// used as coordinate names.
bool is_reserved_identifier(std::string_view name);

/// True for [A-Za-z_][A-Za-z0-9_]*.
bool is_valid_identifier(std::string_view name);

}  // namespace affalg
