#include "affalg/chart.hpp"

#include <algorithm>
#include <cctype>

#include "affalg/expr.hpp"

namespace affalg {

bool is_reserved_identifier(std::string_view name) {
  return name == "sin" || name == "cos" || name == "tan" || name == "exp" ||
         name == "log" || name == "sqrt";
}

bool is_valid_identifier(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

void Chart::add(const std::string& name, Role role) {
  if (!is_valid_identifier(name))
    throw ExprError("invalid coordinate name '" + name + "'");
  if (is_reserved_identifier(name))
    throw ExprError("coordinate name '" + name + "' is a reserved function name");
  if (contains(name))
    throw ExprError("duplicate coordinate name '" + name + "'");
  m_names.push_back(name);
  m_roles.push_back(role);
}

Chart Chart::base(const std::vector<std::string>& names) {
  Chart c;
  for (const auto& n : names) c.add(n, Role::Base);
  return c;
}

std::optional<std::size_t> Chart::index(std::string_view name) const {
  for (std::size_t i = 0; i < m_names.size(); ++i)
    if (m_names[i] == name) return i;
  return std::nullopt;
}

std::vector<std::string> Chart::names_with_role(Role role) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m_names.size(); ++i)
    if (m_roles[i] == role) out.push_back(m_names[i]);
  return out;
}

}  // namespace affalg
