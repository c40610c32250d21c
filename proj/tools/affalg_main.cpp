// affalg: validate, derive, lift, poisson, integrate and export-forms on
// affine Lie algebroid spec files.
//
// Exit codes: 0 success, 1 mathematical failure (axiom violation, singular
// Lagrangian, aborted integration), 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "affalg/dynamics.hpp"
#include "affalg/lagrangian.hpp"
#include "affalg/poisson.hpp"
#include "affalg/specfile.hpp"
#include "affalg/validate.hpp"

using namespace affalg;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kMathFailure = 1;
constexpr int kUsage = 2;

struct CommonOpts {
  std::string file;
  bool as_json = false;
  std::string out;
  std::uint64_t seed = ZeroOptions{}.seed;
  double tol = ZeroOptions{}.tol;
  int samples = ZeroOptions{}.samples;
};

ZeroOptions zero_options(const CommonOpts& c) {
  ZeroOptions o;
  o.seed = c.seed;
  o.tol = c.tol;
  o.samples = c.samples;
  return o;
}

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->set_help_flag("--help", "print help");  // frees -h for the step option
  cmd->add_option("file", c.file, "algebroid spec file (.alg)")->required();
  cmd->add_flag("--json", c.as_json, "machine-readable JSON output");
  cmd->add_option("--out", c.out, "write output to this path instead of stdout");
  cmd->add_option("--seed", c.seed, "sampling seed (reproducible runs)");
  cmd->add_option("--tol", c.tol, "zero-test tolerance");
  cmd->add_option("--samples", c.samples, "zero-test sample count");
}

void emit(const CommonOpts& c, const std::string& payload) {
  if (c.out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw SpecFileError("cannot write '" + c.out + "'");
  f << payload;
}

json witness_json(const ZeroResult& r) {
  json w;
  w["state"] = to_string(r.state);
  w["note"] = r.note;
  if (r.witness) {
    w["witness"]["point"] = r.witness->point;
    w["witness"]["value"] = r.witness->value;
  }
  return w;
}

//------------------------------------------------------------------ validate

int cmd_validate(const CommonOpts& c, const std::string& probe) {
  AlgebroidSpecFile spec = AlgebroidSpecFile::load(c.file);
  AffinePtr alg = spec.build();
  std::optional<Expr> probe_expr;
  if (!probe.empty()) probe_expr = parse(probe, alg->chart());
  ValidationReport report = validate(alg, zero_options(c), probe_expr);

  if (c.as_json) {
    json j;
    j["fixture"] = alg->name();
    j["seed"] = c.seed;
    j["tol"] = c.tol;
    j["all_passed"] = report.all_passed();
    j["checks"] = json::array();
    for (const auto& check : report.checks) {
      json e = witness_json(check.result);
      e["axiom"] = check.axiom;
      e["detail"] = check.detail;
      j["checks"].push_back(std::move(e));
    }
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "validate " << alg->name() << "\n" << report.to_text();
    os << (report.all_passed() ? "all axioms hold\n" : "AXIOM FAILURES PRESENT\n");
    emit(c, os.str());
  }
  return report.all_passed() ? kOk : kMathFailure;
}

//------------------------------------------------------------------ derive

int cmd_derive(const CommonOpts& c) {
  AlgebroidSpecFile spec = AlgebroidSpecFile::load(c.file);
  AffinePtr alg = spec.build();
  if (!spec.lagrangian)
    throw SpecFileError("'" + c.file + "' declares no lagrangian to derive from");
  auto prol = ProlongedAlgebroid::make(alg);
  LagrangianSystem sys(prol, *spec.lagrangian_expr(alg));
  PseudoSode gamma = sys.derive_sode(zero_options(c));

  json j;
  std::ostringstream os;
  j["fixture"] = alg->name();
  j["lagrangian"] = *spec.lagrangian;
  os << "derive " << alg->name() << "  (L = " << *spec.lagrangian << ")\n";
  for (std::size_t i = 0; i < alg->chart().size(); ++i) {
    std::string rate = to_string(gamma.base_field()[i]);
    os << "  dot " << alg->chart().name(i) << " = " << rate << "\n";
    j["xdot"][alg->chart().name(i)] = rate;
  }
  if (gamma.has_explicit_forces()) {
    j["implicit"] = false;
    for (std::size_t a = 0; a < gamma.forces().size(); ++a) {
      std::string f = to_string(simplify(gamma.forces()[a]));
      os << "  F_" << (a + 1) << " = " << f << "\n";
      j["forces"]["F_" + std::to_string(a + 1)] = f;
    }
  } else {
    j["implicit"] = true;
    auto g = sys.hessian();
    auto rhs = sys.euler_lagrange_rhs();
    os << "  forces are implicit: g(x,y) F = rhs with\n";
    for (std::size_t a = 0; a < g.size(); ++a) {
      std::ostringstream row;
      for (std::size_t b = 0; b < g.size(); ++b)
        row << (b ? ", " : "") << to_string(simplify(g[a][b]));
      os << "    g[" << (a + 1) << "] = [" << row.str() << "]   rhs["
         << (a + 1) << "] = " << to_string(rhs[a]) << "\n";
      j["hessian"].push_back(row.str());
      j["rhs"].push_back(to_string(rhs[a]));
    }
  }
  emit(c, c.as_json ? j.dump(2) + "\n" : os.str());
  return kOk;
}

//------------------------------------------------------------------ lift

int cmd_lift(const CommonOpts& c, const std::string& coeffs) {
  AlgebroidSpecFile spec = AlgebroidSpecFile::load(c.file);
  AffinePtr alg = spec.build();
  std::vector<Expr> coeff;
  {
    std::stringstream ss(coeffs);
    std::string part;
    while (std::getline(ss, part, ','))
      coeff.push_back(parse(part, alg->chart()));
  }
  if (coeff.size() != alg->frame_size())
    throw SpecFileError("--coeffs needs " + std::to_string(alg->frame_size()) +
                        " comma-separated expressions (one per frame section)");
  auto prol = ProlongedAlgebroid::make(alg);
  Section zeta = alg->section(coeff);
  Section complete = prol->complete_lift(zeta).simplified();
  Section vertical = prol->vertical_lift(zeta).simplified();

  if (c.as_json) {
    json j;
    j["fixture"] = alg->name();
    for (std::size_t a = 0; a < prol->frame_size(); ++a) {
      j["complete"][prol->frame_name(a)] = to_string(complete.coefficient(a));
      j["vertical"][prol->frame_name(a)] = to_string(vertical.coefficient(a));
    }
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "zeta   = " << zeta.str() << "\n";
    os << "zeta^C = " << complete.str() << "\n";
    os << "zeta^V = " << vertical.str() << "\n";
    emit(c, os.str());
  }
  return kOk;
}

//------------------------------------------------------------------ poisson

int cmd_poisson(const CommonOpts& c, const std::string& f_text,
                const std::string& g_text) {
  AlgebroidSpecFile spec = AlgebroidSpecFile::load(c.file);
  AffinePtr alg = spec.build();
  PoissonStructure ps = PoissonStructure::from(alg);
  const Chart& dc = ps.dual_chart();

  if (!f_text.empty() || !g_text.empty()) {
    if (f_text.empty() || g_text.empty())
      throw SpecFileError("--f and --g must be given together");
    Expr f = parse(f_text, dc);
    Expr g = parse(g_text, dc);
    Expr b = ps.bracket(f, g);
    if (c.as_json) {
      json j;
      j["fixture"] = alg->name();
      j["f"] = f_text;
      j["g"] = g_text;
      j["bracket"] = to_string(b);
      emit(c, j.dump(2) + "\n");
    } else {
      emit(c, "{" + f_text + ", " + g_text + "} = " + to_string(b) + "\n");
    }
    return kOk;
  }

  json j;
  std::ostringstream os;
  j["fixture"] = alg->name();
  os << "poisson table for " << alg->name() << " on coordinates (";
  for (std::size_t i = 0; i < dc.size(); ++i) os << (i ? "," : "") << dc.name(i);
  os << ")\n";
  for (std::size_t a = 0; a < dc.size(); ++a) {
    for (std::size_t b = a + 1; b < dc.size(); ++b) {
      Expr comp = simplify(ps.component(a, b));
      std::string key = "{" + dc.name(a) + "," + dc.name(b) + "}";
      j["table"][key] = to_string(comp);
      if (!comp.is_literal_zero())
        os << "  " << key << " = " << to_string(comp) << "\n";
    }
  }
  os << "  (all other coordinate brackets vanish)\n";
  emit(c, c.as_json ? j.dump(2) + "\n" : os.str());
  return kOk;
}

//------------------------------------------------------------------ integrate

int cmd_integrate(const CommonOpts& c, double t0_override, double t1_override,
                  double h_override, bool have_t0, bool have_t1, bool have_h) {
  AlgebroidSpecFile spec = AlgebroidSpecFile::load(c.file);
  AffinePtr alg = spec.build();
  if (!spec.lagrangian)
    throw SpecFileError("'" + c.file + "' declares no lagrangian");
  if (!spec.integrate)
    throw SpecFileError("'" + c.file + "' has no integrate block");

  double t0 = have_t0 ? t0_override : spec.integrate->t0;
  double t1 = have_t1 ? t1_override : spec.integrate->t1;
  double h = have_h ? h_override : spec.integrate->h;
  if (!(h > 0.0)) throw SpecFileError("step size must be positive");
  if (!(t1 > t0)) throw SpecFileError("t1 must exceed t0");

  auto prol = ProlongedAlgebroid::make(alg);
  LagrangianSystem sys(prol, *spec.lagrangian_expr(alg));
  PseudoSode gamma = sys.derive_sode(zero_options(c));

  Env initial(spec.integrate->initial.begin(), spec.integrate->initial.end());
  Trajectory traj = integrate(gamma, initial, t0, t1, h);
  std::vector<std::pair<std::string, Expr>> monitors;
  for (const auto& [name, text] : spec.integrate->monitors)
    monitors.emplace_back(name, parse(text, alg->e_chart()));
  if (!monitors.empty() && !traj.states.empty()) monitor(gamma, monitors, traj);

  std::string out_path = c.out;
  if (out_path.empty())
    out_path = alg->name() + std::string("_trajectory.") + (c.as_json ? "json" : "csv");
  RunMetadata meta{alg->name(), t0, t1, h, c.seed, c.tol};
  if (c.as_json) {
    std::ofstream f(out_path);
    if (!f) throw SpecFileError("cannot write '" + out_path + "'");
    f << trajectory_json(traj, meta) << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw SpecFileError("cannot write '" + out_path + "'");
    write_csv(traj, f);
  }

  if (traj.failure) {
    std::cerr << "integration aborted at node " << traj.failure->node << ": "
              << traj.failure->message << " (partial trajectory written to "
              << out_path << ")\n";
    return kMathFailure;
  }
  std::cout << "wrote " << out_path << "  nodes=" << traj.node_count()
            << "  max_residual=" << traj.max_residual() << "\n";
  std::cout << "endpoint:";
  std::size_t k = 0;
  for (const auto& n : traj.base_names) std::cout << " " << n << "=" << traj.endpoint()[k++];
  for (const auto& n : traj.fiber_names) std::cout << " " << n << "=" << traj.endpoint()[k++];
  std::cout << "\n";
  if (!traj.monitor_names.empty()) {
    std::cout << "monitors (first -> last):";
    for (std::size_t m = 0; m < traj.monitor_names.size(); ++m)
      std::cout << " " << traj.monitor_names[m] << "="
                << traj.monitor_values.front()[m] << "->"
                << traj.monitor_values.back()[m];
    std::cout << "\n";
  }
  return kOk;
}

//------------------------------------------------------------------ export-forms

int cmd_export_forms(const CommonOpts& c) {
  AlgebroidSpecFile spec = AlgebroidSpecFile::load(c.file);
  AffinePtr alg = spec.build();
  if (!spec.lagrangian)
    throw SpecFileError("'" + c.file + "' declares no lagrangian");
  auto prol = ProlongedAlgebroid::make(alg);
  LagrangianSystem sys(prol, *spec.lagrangian_expr(alg));
  KForm theta = sys.cartan_one_form();
  KForm omega = sys.cartan_two_form();

  auto index_name = [&](const MultiIndex& idx) {
    std::string s;
    for (std::size_t p = 0; p < idx.size(); ++p) {
      if (p) s += "^";
      s += prol->frame_name(idx[p]);
    }
    return s;
  };

  if (c.as_json) {
    json j;
    j["fixture"] = alg->name();
    j["lagrangian"] = *spec.lagrangian;
    j["theta_L"] = json::object();
    for (const auto& [idx, e] : theta.coefficients())
      j["theta_L"][index_name(idx)] = to_string(e);
    j["omega_L"] = json::object();
    for (const auto& [idx, e] : omega.coefficients())
      j["omega_L"][index_name(idx)] = to_string(e);
    emit(c, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "Cartan forms for " << alg->name() << " (L = " << *spec.lagrangian << ")\n";
    for (const auto& [idx, e] : theta.coefficients())
      os << "  Theta_L[" << index_name(idx) << "] = " << to_string(e) << "\n";
    for (const auto& [idx, e] : omega.coefficients())
      os << "  Omega_L[" << index_name(idx) << "] = " << to_string(e) << "\n";
    emit(c, os.str());
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symbolic-numeric engine for Lie algebroid structures on affine bundles"};
  app.require_subcommand(1);

  CommonOpts c;
  std::string probe, coeffs, f_text, g_text;
  double t0 = 0, t1 = 0, h = 0;

  CLI::App* validate_cmd = app.add_subcommand("validate", "check the defining axioms");
  add_common(validate_cmd, c);
  validate_cmd->add_option("--probe", probe, "e0-exactness probe function over the base");

  CLI::App* derive_cmd = app.add_subcommand("derive", "derive the Euler-Lagrange system");
  add_common(derive_cmd, c);

  CLI::App* lift_cmd =
      app.add_subcommand("lift", "complete and vertical lifts of a section");
  add_common(lift_cmd, c);
  lift_cmd->add_option("--coeffs", coeffs, "comma-separated section coefficients")
      ->required();

  CLI::App* poisson_cmd =
      app.add_subcommand("poisson", "Poisson bracket table on the extended dual");
  add_common(poisson_cmd, c);
  poisson_cmd->add_option("--f", f_text, "first bracket argument");
  poisson_cmd->add_option("--g", g_text, "second bracket argument");

  CLI::App* integrate_cmd =
      app.add_subcommand("integrate", "integrate the derived dynamics");
  add_common(integrate_cmd, c);
  CLI::Option* ot0 = integrate_cmd->add_option("--t0", t0, "start time override");
  CLI::Option* ot1 = integrate_cmd->add_option("--t1", t1, "end time override");
  CLI::Option* oh = integrate_cmd->add_option("--h", h, "step size override");

  CLI::App* export_cmd =
      app.add_subcommand("export-forms", "print Cartan form coefficients");
  add_common(export_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(c, probe);
    if (derive_cmd->parsed()) return cmd_derive(c);
    if (lift_cmd->parsed()) return cmd_lift(c, coeffs);
    if (poisson_cmd->parsed()) return cmd_poisson(c, f_text, g_text);
    if (integrate_cmd->parsed())
      return cmd_integrate(c, t0, t1, h, ot0->count() > 0, ot1->count() > 0,
                           oh->count() > 0);
    if (export_cmd->parsed()) return cmd_export_forms(c);
  } catch (const SingularLagrangianError& e) {
    std::cerr << "error: " << e.what();
    if (!e.point.empty()) {
      std::cerr << " at";
      for (const auto& [k, v] : e.point) std::cerr << " " << k << "=" << v;
    }
    std::cerr << "\n";
    return kMathFailure;
  } catch (const SpecFileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ExprError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
