#include "affalg/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace affalg {

double Trajectory::max_residual() const {
  double m = 0.0;
  for (double r : admissibility_residual) m = std::max(m, r);
  return m;
}

namespace {

void state_to_env(const Trajectory& traj, const std::vector<double>& s, Env& env) {
  std::size_t k = 0;
  for (const auto& n : traj.base_names) env[n] = s[k++];
  for (const auto& n : traj.fiber_names) env[n] = s[k++];
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

Trajectory integrate(const PseudoSode& gamma, const Env& initial_state, double t0,
                     double t1, double h) {
  if (!(h > 0.0)) throw AlgebroidError("step size must be positive");
  if (!(t1 > t0)) throw AlgebroidError("t1 must exceed t0");

  const auto& prol = *gamma.prolongation();
  const auto& src = *prol.source();

  Trajectory traj;
  traj.base_names = src.chart().names();
  traj.fiber_names = src.fiber_coordinates();
  const std::size_t nx = traj.base_names.size();
  const std::size_t ny = traj.fiber_names.size();
  const std::size_t dim = nx + ny;

  std::vector<double> state(dim, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    auto it = initial_state.find(traj.base_names[i]);
    if (it == initial_state.end())
      throw AlgebroidError("initial state misses coordinate '" + traj.base_names[i] + "'");
    state[i] = it->second;
  }
  for (std::size_t a = 0; a < ny; ++a) {
    auto it = initial_state.find(traj.fiber_names[a]);
    if (it == initial_state.end())
      throw AlgebroidError("initial state misses coordinate '" + traj.fiber_names[a] + "'");
    state[nx + a] = it->second;
  }

  const std::size_t steps =
      static_cast<std::size_t>(std::floor((t1 - t0) / h + 1e-9));

  Env env;
  std::vector<double> xdot, ydot;
  auto rates = [&](const std::vector<double>& s, std::vector<double>& out) {
    std::size_t k = 0;
    for (const auto& n : traj.base_names) env[n] = s[k++];
    for (const auto& n : traj.fiber_names) env[n] = s[k++];
    gamma.eval_rates(env, xdot, ydot);
    out.resize(dim);
    for (std::size_t i = 0; i < nx; ++i) out[i] = xdot[i];
    for (std::size_t a = 0; a < ny; ++a) out[nx + a] = ydot[a];
  };

  // admissibility residual: the x-rates the integrator uses against a fresh
  // evaluation of the anchor formula at the node
  auto residual_at = [&](const std::vector<double>& s,
                         const std::vector<double>& used_rates) {
    std::size_t k = 0;
    for (const auto& n : traj.base_names) env[n] = s[k++];
    for (const auto& n : traj.fiber_names) env[n] = s[k++];
    double r = 0.0;
    for (std::size_t i = 0; i < nx; ++i)
      r = std::max(r, std::abs(used_rates[i] - eval(gamma.base_field()[i], env)));
    return r;
  };

  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  for (std::size_t node = 0;; ++node) {
    double t = t0 + static_cast<double>(node) * h;
    try {
      rates(state, k1);
      traj.times.push_back(t);
      traj.states.push_back(state);
      traj.admissibility_residual.push_back(residual_at(state, k1));
    } catch (const ExprError& e) {
      traj.failure = IntegrationFailure{node, e.what()};
      break;
    }
    if (node == steps) break;
    try {
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
      rates(tmp, k2);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
      rates(tmp, k3);
      for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + h * k3[i];
      rates(tmp, k4);
      for (std::size_t i = 0; i < dim; ++i)
        state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    } catch (const ExprError& e) {
      traj.failure = IntegrationFailure{node + 1, e.what()};
      break;
    }
    if (!all_finite(state)) {
      traj.failure = IntegrationFailure{node + 1, "non-finite state"};
      break;
    }
  }
  return traj;
}

void monitor(const PseudoSode& gamma,
             const std::vector<std::pair<std::string, Expr>>& exprs, Trajectory& traj) {
  const Chart& chart = gamma.prolongation()->chart();
  for (const auto& [name, e] : exprs) {
    for (const auto& v : free_variables(e))
      if (!chart.contains(v))
        throw AlgebroidError("monitor '" + name + "' depends on '" + v +
                             "', not an (x,y) coordinate");
    traj.monitor_names.push_back(name);
  }
  traj.monitor_values.assign(traj.node_count(),
                             std::vector<double>(exprs.size(),
                                                 std::numeric_limits<double>::quiet_NaN()));
  Env env;
  for (std::size_t node = 0; node < traj.node_count(); ++node) {
    state_to_env(traj, traj.states[node], env);
    for (std::size_t j = 0; j < exprs.size(); ++j) {
      try {
        traj.monitor_values[node][j] = eval(exprs[j].second, env);
      } catch (const EvalError& err) {
        std::ostringstream os;
        os << "node " << node << ", " << exprs[j].first << ": " << err.what();
        traj.monitor_errors.push_back(os.str());
      }
    }
  }
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_csv(const Trajectory& traj, std::ostream& os) {
  os << "t";
  for (const auto& n : traj.base_names) os << ",x_" << n;
  for (const auto& n : traj.fiber_names) os << ",y_" << n;
  os << ",adm_residual";
  for (const auto& n : traj.monitor_names) os << "," << n;
  os << "\n";
  for (std::size_t node = 0; node < traj.node_count(); ++node) {
    os << fmt_double(traj.times[node]);
    for (double v : traj.states[node]) os << "," << fmt_double(v);
    os << "," << fmt_double(traj.admissibility_residual[node]);
    if (!traj.monitor_values.empty())
      for (double v : traj.monitor_values[node]) os << "," << fmt_double(v);
    os << "\n";
  }
}

std::string trajectory_json(const Trajectory& traj, const RunMetadata& meta) {
  nlohmann::json j;
  j["fixture"] = meta.fixture;
  j["t0"] = meta.t0;
  j["t1"] = meta.t1;
  j["h"] = meta.h;
  j["seed"] = meta.seed;
  j["tol"] = meta.tol;
  j["columns"] = nlohmann::json::array();
  j["columns"].push_back("t");
  for (const auto& n : traj.base_names) j["columns"].push_back("x_" + n);
  for (const auto& n : traj.fiber_names) j["columns"].push_back("y_" + n);
  j["columns"].push_back("adm_residual");
  for (const auto& n : traj.monitor_names) j["columns"].push_back(n);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t node = 0; node < traj.node_count(); ++node) {
    nlohmann::json row = nlohmann::json::array();
    row.push_back(traj.times[node]);
    for (double v : traj.states[node]) row.push_back(v);
    row.push_back(traj.admissibility_residual[node]);
    if (!traj.monitor_values.empty())
      for (double v : traj.monitor_values[node])
        if (std::isnan(v))
          row.push_back(nullptr);
        else
          row.push_back(v);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["max_residual"] = traj.max_residual();
  if (!traj.states.empty()) j["endpoint"] = traj.endpoint();
  if (!traj.monitor_errors.empty()) j["monitor_errors"] = traj.monitor_errors;
  if (traj.failure) {
    j["failure"] = {{"node", traj.failure->node}, {"message", traj.failure->message}};
  }
  return j.dump(2);
}

}  // namespace affalg
