#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "affalg/prolong.hpp"

namespace affalg {

struct IntegrationFailure {
  std::size_t node = 0;
  std::string message;
};

/// Uniform-grid trajectory of the base vector field rho1(Gamma): states
/// (x^i, y^alpha) per node, the per-node admissibility residual, and any
/// monitor samples. A failed run keeps the partial trajectory and records
/// the failure.
struct Trajectory {
  std::vector<std::string> base_names;
  std::vector<std::string> fiber_names;
  std::vector<std::string> monitor_names;

  std::vector<double> times;
  std::vector<std::vector<double>> states;  // per node: x then y
  std::vector<double> admissibility_residual;
  std::vector<std::vector<double>> monitor_values;  // per node; NaN marks an error
  std::vector<std::string> monitor_errors;          // human-readable error log

  std::optional<IntegrationFailure> failure;

  std::size_t node_count() const { return times.size(); }
  const std::vector<double>& endpoint() const { return states.back(); }
  double max_residual() const;
};

/// Classical fixed-step 4th-order integration of xdot^i = rho^i_0 +
/// rho^i_alpha y^alpha, ydot^alpha = F^alpha from t0 to t1 with step h.
/// Node count is floor((t1-t0)/h) + 1 (round-off guarded). Domain errors
/// and non-finite states abort with a partial trajectory.
Trajectory integrate(const PseudoSode& gamma, const Env& initial_state, double t0,
                     double t1, double h);

/// Samples expressions over (x,y) along an existing trajectory; evaluation
/// errors are recorded per node, never fatal.
void monitor(const PseudoSode& gamma,
             const std::vector<std::pair<std::string, Expr>>& exprs, Trajectory& traj);

/// CSV export: header t,x_<name>...,y_<name>...,adm_residual,<monitors>.
void write_csv(const Trajectory& traj, std::ostream& os);

struct RunMetadata {
  std::string fixture;
  double t0 = 0.0, t1 = 0.0, h = 0.0;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

/// JSON export with run metadata; deterministic for fixed inputs.
std::string trajectory_json(const Trajectory& traj, const RunMetadata& meta);

}  // namespace affalg
