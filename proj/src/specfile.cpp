#include "affalg/specfile.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace affalg {

namespace {

using nlohmann::json;

std::vector<std::size_t> parse_key(const std::string& key, std::size_t arity,
                                   std::size_t fiber_dim, const char* table) {
  std::vector<std::size_t> out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      long v = std::stol(part);
      if (v < 1 || static_cast<std::size_t>(v) > fiber_dim)
        throw SpecFileError(std::string(table) + " index '" + part +
                            "' out of range in key '" + key + "'");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::invalid_argument&) {
      throw SpecFileError(std::string(table) + " key '" + key + "' is malformed");
    } catch (const std::out_of_range&) {
      throw SpecFileError(std::string(table) + " key '" + key + "' is malformed");
    }
  }
  if (out.size() != arity)
    throw SpecFileError(std::string(table) + " key '" + key + "' must have " +
                        std::to_string(arity) + " indices");
  return out;
}

std::vector<std::string> string_list(const json& j, const char* field) {
  if (!j.is_array()) throw SpecFileError(std::string("'") + field + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string())
      throw SpecFileError(std::string("'") + field + "' entries must be strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

}  // namespace

AlgebroidSpecFile AlgebroidSpecFile::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SpecFileError(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw SpecFileError("top level must be a JSON object");

  AlgebroidSpecFile spec;
  spec.name = j.value("name", "unnamed");
  if (!j.contains("base")) throw SpecFileError("missing 'base'");
  spec.base = string_list(j["base"], "base");
  if (!j.contains("fiber")) throw SpecFileError("missing 'fiber'");
  spec.fiber = string_list(j["fiber"], "fiber");

  const json anchor = j.value("anchor", json::object());
  spec.rho0 = anchor.contains("rho0") ? string_list(anchor["rho0"], "anchor.rho0")
                                      : std::vector<std::string>(spec.base.size(), "0");
  if (anchor.contains("rho")) {
    if (!anchor["rho"].is_array()) throw SpecFileError("'anchor.rho' must be an array");
    for (const auto& row : anchor["rho"])
      spec.rho.push_back(string_list(row, "anchor.rho row"));
  } else {
    spec.rho.assign(spec.base.size(), std::vector<std::string>(spec.fiber.size(), "0"));
  }

  const json structure = j.value("structure", json::object());
  const json c0_table = structure.value("C0", json::object());
  for (const auto& [key, value] : c0_table.items()) {
    if (!value.is_string()) throw SpecFileError("structure.C0 values must be strings");
    spec.c0[key] = value.get<std::string>();
  }
  const json c_table = structure.value("C", json::object());
  for (const auto& [key, value] : c_table.items()) {
    if (!value.is_string()) throw SpecFileError("structure.C values must be strings");
    spec.c[key] = value.get<std::string>();
  }

  if (j.contains("lagrangian")) {
    if (!j["lagrangian"].is_string()) throw SpecFileError("'lagrangian' must be a string");
    spec.lagrangian = j["lagrangian"].get<std::string>();
  }
  if (j.contains("integrate")) {
    const json& ib = j["integrate"];
    if (!ib.is_object()) throw SpecFileError("'integrate' must be an object");
    IntegrateBlock block;
    const json initial = ib.value("initial", json::object());
    for (const auto& [key, value] : initial.items()) {
      if (!value.is_number()) throw SpecFileError("integrate.initial values must be numbers");
      block.initial[key] = value.get<double>();
    }
    block.t0 = ib.value("t0", 0.0);
    block.t1 = ib.value("t1", 1.0);
    block.h = ib.value("h", 1e-3);
    const json monitors = ib.value("monitors", json::object());
    for (const auto& [key, value] : monitors.items()) {
      if (!value.is_string()) throw SpecFileError("integrate.monitors values must be strings");
      block.monitors.emplace_back(key, value.get<std::string>());
    }
    spec.integrate = std::move(block);
  }
  return spec;
}

AlgebroidSpecFile AlgebroidSpecFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecFileError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return from_json_text(buf.str());
  } catch (const SpecFileError& e) {
    throw SpecFileError(path + ": " + e.what());
  }
}

AffinePtr AlgebroidSpecFile::build() const {
  Chart base_chart;
  try {
    base_chart = Chart::base(base);
  } catch (const ExprError& e) {
    throw SpecFileError(std::string("base chart: ") + e.what());
  }
  const std::size_t dim = base.size();
  const std::size_t n = fiber.size();

  if (rho0.size() != dim)
    throw SpecFileError("anchor.rho0 must list one expression per base coordinate");
  if (rho.size() != dim)
    throw SpecFileError("anchor.rho must have one row per base coordinate");
  for (const auto& row : rho)
    if (row.size() != n)
      throw SpecFileError("anchor.rho rows must have one column per fiber coordinate");

  auto parse_field = [&](const std::string& text, const std::string& where) -> Expr {
    try {
      return parse(text, base_chart);
    } catch (const ParseError& e) {
      throw SpecFileError(where + ": " + e.what());
    }
  };

  std::vector<std::vector<Expr>> anchor(dim, std::vector<Expr>(n + 1, Expr::zero()));
  for (std::size_t i = 0; i < dim; ++i) {
    anchor[i][0] = parse_field(rho0[i], "anchor.rho0[" + std::to_string(i) + "]");
    for (std::size_t a = 0; a < n; ++a)
      anchor[i][a + 1] = parse_field(
          rho[i][a], "anchor.rho[" + std::to_string(i) + "][" + std::to_string(a) + "]");
  }

  std::vector<VectorAlgebroid::StructureEntry> entries;
  for (const auto& [key, text] : c0) {
    auto idx = parse_key(key, 2, n, "structure.C0");  // gamma, beta
    entries.push_back({0, idx[1], idx[0], parse_field(text, "structure.C0[" + key + "]")});
  }
  for (const auto& [key, text] : c) {
    auto idx = parse_key(key, 3, n, "structure.C");  // gamma, alpha, beta
    if (idx[1] >= idx[2])
      throw SpecFileError("structure.C key '" + key + "' must have alpha < beta");
    entries.push_back(
        {idx[1], idx[2], idx[0], parse_field(text, "structure.C[" + key + "]")});
  }

  try {
    return AffineAlgebroid::make(name, base_chart, fiber, std::move(anchor),
                                 std::move(entries));
  } catch (const ExprError& e) {
    throw SpecFileError(std::string("algebroid construction: ") + e.what());
  }
}

std::optional<Expr> AlgebroidSpecFile::lagrangian_expr(const AffinePtr& alg) const {
  if (!lagrangian) return std::nullopt;
  try {
    return parse(*lagrangian, alg->e_chart());
  } catch (const ParseError& e) {
    throw SpecFileError(std::string("lagrangian: ") + e.what());
  }
}

std::string AlgebroidSpecFile::to_json_text() const {
  json j;
  j["name"] = name;
  j["base"] = base;
  j["fiber"] = fiber;
  j["anchor"]["rho0"] = rho0;
  j["anchor"]["rho"] = rho;
  j["structure"]["C0"] = json::object();
  for (const auto& [k, v] : c0) j["structure"]["C0"][k] = v;
  j["structure"]["C"] = json::object();
  for (const auto& [k, v] : c) j["structure"]["C"][k] = v;
  if (lagrangian) j["lagrangian"] = *lagrangian;
  if (integrate) {
    json ib;
    ib["initial"] = json::object();
    for (const auto& [k, v] : integrate->initial) ib["initial"][k] = v;
    ib["t0"] = integrate->t0;
    ib["t1"] = integrate->t1;
    ib["h"] = integrate->h;
    ib["monitors"] = json::object();
    for (const auto& [k, v] : integrate->monitors) ib["monitors"][k] = v;
    j["integrate"] = std::move(ib);
  }
  return j.dump(2) + "\n";
}

void AlgebroidSpecFile::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw SpecFileError("cannot write '" + path + "'");
  out << to_json_text();
}

AlgebroidSpecFile AlgebroidSpecFile::from_algebroid(const AffinePtr& alg,
                                                    const AlgebroidSpecFile& original) {
  AlgebroidSpecFile spec;
  spec.name = alg->name();
  spec.base = alg->chart().names();
  spec.fiber = alg->fiber_coordinates();
  const std::size_t dim = spec.base.size();
  const std::size_t n = spec.fiber.size();
  for (std::size_t i = 0; i < dim; ++i) {
    spec.rho0.push_back(to_string(alg->rho0(i)));
    std::vector<std::string> row;
    for (std::size_t a = 1; a <= n; ++a) row.push_back(to_string(alg->rho(i, a)));
    spec.rho.push_back(std::move(row));
  }
  for (const auto& s : alg->structure_entries()) {
    std::string text = to_string(s.value);
    if (s.a == 0)
      spec.c0[std::to_string(s.c) + "," + std::to_string(s.b)] = text;
    else
      spec.c[std::to_string(s.c) + "," + std::to_string(s.a) + "," +
             std::to_string(s.b)] = text;
  }
  spec.lagrangian = original.lagrangian;
  spec.integrate = original.integrate;
  return spec;
}

}  // namespace affalg
