#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "affalg/dynamics.hpp"
#include "affalg/lagrangian.hpp"
#include "support/fixtures.hpp"

using namespace affalg;
using namespace testsupport;

namespace {

PseudoSode harmonic_sode() {
  auto A = canonical_j1();
  auto P = ProlongedAlgebroid::make(A);
  LagrangianSystem sys(P, parse("y1^2/2 - x^2/2", A->e_chart()));
  return sys.derive_sode();
}

PseudoSode euler_sode() {
  auto A = euler_top();
  auto P = ProlongedAlgebroid::make(A);
  LagrangianSystem sys(P, parse("y1^2/2 + y2^2 + 3*y3^2/2", A->e_chart()));
  return sys.derive_sode();
}

// Independent oracle: hand-coded rigid-body equations integrated with plain
// doubles, no symbolic machinery involved.
std::array<double, 3> reference_euler_top(std::array<double, 3> y, double t1, double h) {
  auto f = [](const std::array<double, 3>& s) {
    return std::array<double, 3>{-s[1] * s[2], s[2] * s[0], -s[0] * s[1] / 3.0};
  };
  std::size_t steps = static_cast<std::size_t>(std::llround(t1 / h));
  for (std::size_t n = 0; n < steps; ++n) {
    auto k1 = f(y);
    std::array<double, 3> tmp;
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    auto k2 = f(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    auto k3 = f(tmp);
    for (int i = 0; i < 3; ++i) tmp[i] = y[i] + h * k3[i];
    auto k4 = f(tmp);
    for (int i = 0; i < 3; ++i)
      y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y;
}

}  // namespace

TEST_CASE("harmonic oscillator hits the analytic solution") {
  PseudoSode gamma = harmonic_sode();
  Trajectory traj = integrate(gamma, {{"t", 0.0}, {"x", 1.0}, {"y1", 0.0}}, 0.0, 1.0, 1e-3);
  REQUIRE_FALSE(traj.failure.has_value());
  CHECK(traj.node_count() == 1001);
  // state layout: (t, x, y1); x(1) = cos 1, y1(1) = -sin 1
  const auto& end = traj.endpoint();
  CHECK(std::abs(end[0] - 1.0) <= 1e-12);
  CHECK(std::abs(end[1] - std::cos(1.0)) <= 1e-6);
  CHECK(std::abs(end[2] + std::sin(1.0)) <= 1e-6);
  CHECK(traj.max_residual() <= 1e-12);
}

TEST_CASE("free particle is exact to round-off") {
  auto A = canonical_j1();
  auto P = ProlongedAlgebroid::make(A);
  LagrangianSystem sys(P, parse("y1^2/2", A->e_chart()));
  Trajectory traj =
      integrate(sys.derive_sode(), {{"t", 0.0}, {"x", 0.0}, {"y1", 1.0}}, 0.0, 1.0, 1e-3);
  REQUIRE_FALSE(traj.failure.has_value());
  CHECK(std::abs(traj.endpoint()[1] - 1.0) <= 1e-12);
}

TEST_CASE("step halving reduces the endpoint error about 16x") {
  PseudoSode gamma = harmonic_sode();
  auto endpoint_error = [&](double h) {
    Trajectory t = integrate(gamma, {{"t", 0.0}, {"x", 1.0}, {"y1", 0.0}}, 0.0, 1.0, h);
    return std::abs(t.endpoint()[1] - std::cos(1.0));
  };
  double e1 = endpoint_error(0.05);
  double e2 = endpoint_error(0.025);
  double ratio = e1 / e2;
  CHECK_MESSAGE(ratio >= 12.0, "ratio ", ratio);
  CHECK_MESSAGE(ratio <= 20.0, "ratio ", ratio);
}

TEST_CASE("euler top conserves energy and momentum norm") {
  PseudoSode gamma = euler_sode();
  Env init{{"y1", 1.0}, {"y2", 1.0}, {"y3", 1.0}};
  Trajectory traj = integrate(gamma, init, 0.0, 5.0, 1e-3);
  REQUIRE_FALSE(traj.failure.has_value());
  const Chart& ec = gamma.prolongation()->chart();
  monitor(gamma,
          {{"energy", parse("y1^2/2 + y2^2 + 3*y3^2/2", ec)},
           {"momentum_sq", parse("y1^2 + (2*y2)^2 + (3*y3)^2", ec)}},
          traj);
  CHECK(traj.monitor_errors.empty());
  for (std::size_t j = 0; j < 2; ++j) {
    double first = traj.monitor_values.front()[j];
    for (std::size_t node = 0; node < traj.node_count(); ++node) {
      double drift = std::abs(traj.monitor_values[node][j] - first) / std::abs(first);
      REQUIRE(drift <= 1e-8);
    }
  }
  // endpoint against the independent reference integrator
  auto ref = reference_euler_top({1.0, 1.0, 1.0}, 5.0, 1e-3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(traj.endpoint()[i] - ref[i]) <= 1e-12);
}

TEST_CASE("node count follows floor((t1-t0)/h) + 1 with a round-off guard") {
  PseudoSode gamma = harmonic_sode();
  Env init{{"t", 0.0}, {"x", 1.0}, {"y1", 0.0}};
  CHECK(integrate(gamma, init, 0.0, 1.0, 0.3).node_count() == 4);     // last node t=0.9
  CHECK(integrate(gamma, init, 0.0, 0.9, 0.3).node_count() == 4);     // exact division
  CHECK(integrate(gamma, init, 0.0, 0.2, 0.5).node_count() == 1);     // single node
  CHECK_THROWS_AS(integrate(gamma, init, 0.0, 1.0, -0.1), AlgebroidError);
  CHECK_THROWS_AS(integrate(gamma, init, 1.0, 0.0, 0.1), AlgebroidError);
  CHECK_THROWS_AS(integrate(gamma, {{"t", 0.0}}, 0.0, 1.0, 0.1), AlgebroidError);
}

TEST_CASE("monitors sample expressions along the trajectory") {
  auto A = canonical_j1();
  auto P = ProlongedAlgebroid::make(A);
  LagrangianSystem sys(P, parse("y1^2/2", A->e_chart()));
  PseudoSode gamma = sys.derive_sode();
  Trajectory traj = integrate(gamma, {{"t", 0.0}, {"x", 0.0}, {"y1", 1.0}}, 0.0, 1.0, 0.01);
  // L itself is constant 1/2 on the free particle
  auto [hat_e0, bar_e0] = P->split_form(KForm::coframe(A, 0));
  monitor(gamma,
          {{"L", sys.lagrangian()}, {"e0_hat", hat_e0}},
          traj);
  for (std::size_t node = 0; node < traj.node_count(); ++node) {
    CHECK(traj.monitor_values[node][0] == doctest::Approx(0.5).epsilon(1e-12));
    // <e^0, admissible> = 1
    CHECK(traj.monitor_values[node][1] == doctest::Approx(1.0).epsilon(1e-12));
  }

  // harmonic oscillator: x^2 + y^2 stays on the unit circle
  PseudoSode osc = harmonic_sode();
  Trajectory tosc = integrate(osc, {{"t", 0.0}, {"x", 1.0}, {"y1", 0.0}}, 0.0, 1.0, 1e-3);
  monitor(osc, {{"circle", parse("x^2 + y1^2", osc.prolongation()->chart())}}, tosc);
  for (std::size_t node = 0; node < tosc.node_count(); ++node)
    CHECK(std::abs(tosc.monitor_values[node][0] - 1.0) <= 1e-8);

  // per-node evaluation errors are recorded, not fatal
  monitor(osc, {{"bad_log", parse("log(-1 - x^2)", osc.prolongation()->chart())}}, tosc);
  CHECK_FALSE(tosc.monitor_errors.empty());
}

TEST_CASE("integration aborts cleanly on domain errors and blow-up") {
  auto A = canonical_j1();
  auto P = ProlongedAlgebroid::make(A);
  // force with a domain error once x crosses zero
  PseudoSode bad(P, {parse("log(x)", P->chart())});
  Trajectory t1 = integrate(bad, {{"t", 0.0}, {"x", -0.5}, {"y1", 0.0}}, 0.0, 1.0, 0.1);
  REQUIRE(t1.failure.has_value());
  CHECK(t1.failure->node == 0);
  CHECK(t1.states.empty());

  // finite-time blow-up: ydot = y^2 escapes before t = 2
  PseudoSode blow(P, {parse("y1^2", P->chart())});
  Trajectory t2 = integrate(blow, {{"t", 0.0}, {"x", 0.0}, {"y1", 1.0}}, 0.0, 2.0, 1e-3);
  REQUIRE(t2.failure.has_value());
  CHECK(t2.node_count() > 0);
  CHECK(t2.node_count() < 2001);
}

TEST_CASE("CSV and JSON export") {
  PseudoSode gamma = harmonic_sode();
  Trajectory traj = integrate(gamma, {{"t", 0.0}, {"x", 1.0}, {"y1", 0.0}}, 0.0, 0.1, 0.05);
  monitor(gamma, {{"circle", parse("x^2 + y1^2", gamma.prolongation()->chart())}}, traj);
  std::ostringstream os;
  write_csv(traj, os);
  std::istringstream in(os.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x_t,x_x,y_y1,adm_residual,circle");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == traj.node_count());

  RunMetadata meta{"canonical_j1", 0.0, 0.1, 0.05, 42, 1e-9};
  auto j = nlohmann::json::parse(trajectory_json(traj, meta));
  CHECK(j["fixture"] == "canonical_j1");
  CHECK(j["rows"].size() == traj.node_count());
  CHECK(j["columns"].size() == 6);
  CHECK(j.contains("endpoint"));
}
