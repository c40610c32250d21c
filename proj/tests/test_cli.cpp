#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "affalg_cli_test";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  fs::path cap = scratch_dir() / "capture.txt";
  std::string cmd = std::string("\"") + AFFALG_CLI_PATH + "\" " + args + " > " +
                    cap.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  int code = -1;
  if (status != -1) code = WEXITSTATUS(status);
  std::ifstream in(cap);
  std::ostringstream buf;
  buf << in.rdbuf();
  return {code, buf.str()};
}

std::string fix(const std::string& name) {
  return std::string(AFFALG_FIXTURE_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("validate: exit codes and report text") {
  RunResult good = run("validate " + fix("canonical_j1.alg"));
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("all axioms hold") != std::string::npos);

  RunResult bad = run("validate " + fix("broken_jacobi.alg"));
  CHECK(bad.exit_code == 1);
  CHECK(bad.output.find("[FAIL]") != std::string::npos);
  CHECK(bad.output.find("witness") != std::string::npos);

  RunResult missing = run("validate /nonexistent/file.alg");
  CHECK(missing.exit_code == 2);

  RunResult probe = run("validate " + fix("canonical_j1.alg") + " --probe t");
  CHECK(probe.exit_code == 0);
  CHECK(probe.output.find("e0-exactness") != std::string::npos);
}

TEST_CASE("derive prints the Euler-Lagrange system") {
  RunResult osc = run("derive " + fix("canonical_j1.alg"));
  CHECK(osc.exit_code == 0);
  CHECK(osc.output.find("F_1 = -x") != std::string::npos);
  CHECK(osc.output.find("dot x = y1") != std::string::npos);

  RunResult top = run("derive " + fix("euler_top.alg"));
  CHECK(top.exit_code == 0);
  CHECK(top.output.find("F_1 = -y2*y3") != std::string::npos);

  RunResult nolag = run("derive " + fix("broken_jacobi.alg"));
  CHECK(nolag.exit_code == 2);
  CHECK(nolag.output.find("lagrangian") != std::string::npos);
}

TEST_CASE("lift prints both lifts") {
  RunResult r = run("lift " + fix("canonical_j1.alg") + " --coeffs 1,0");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("zeta^C = X0") != std::string::npos);
  CHECK(r.output.find("zeta^V") != std::string::npos);

  RunResult wrong = run("lift " + fix("canonical_j1.alg") + " --coeffs 1,0,0");
  CHECK(wrong.exit_code == 2);
}

TEST_CASE("poisson table and single bracket") {
  RunResult table = run("poisson " + fix("euler_top.alg"));
  CHECK(table.exit_code == 0);
  CHECK(table.output.find("{mu1,mu2} = mu3") != std::string::npos);

  RunResult one = run("poisson " + fix("euler_top.alg") + " --f mu1 --g mu2");
  CHECK(one.exit_code == 0);
  CHECK(one.output.find("mu3") != std::string::npos);

  RunResult badexpr = run("poisson " + fix("euler_top.alg") + " --f nope --g mu2");
  CHECK(badexpr.exit_code == 2);
}

TEST_CASE("integrate writes a trajectory file and a summary") {
  fs::path out = scratch_dir() / "osc.csv";
  RunResult r = run("integrate " + fix("canonical_j1.alg") + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("endpoint") != std::string::npos);
  std::ifstream in(out);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,x_t,x_x,y_y1,adm_residual,energy_circle");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 1001);

  RunResult bad_h = run("integrate " + fix("canonical_j1.alg") + " --h -0.1 --out " +
                        (scratch_dir() / "x.csv").string());
  CHECK(bad_h.exit_code == 2);

  // JSON variant with overrides
  fs::path jout = scratch_dir() / "osc.json";
  RunResult rj = run("integrate " + fix("canonical_j1.alg") + " --json --t1 0.5 --out " +
                     jout.string());
  CHECK(rj.exit_code == 0);
  std::ifstream jin(jout);
  std::ostringstream jbuf;
  jbuf << jin.rdbuf();
  CHECK(jbuf.str().find("\"fixture\": \"canonical_j1\"") != std::string::npos);
  CHECK(jbuf.str().find("\"h\": 0.001") != std::string::npos);
}

TEST_CASE("derive reports implicit forces for velocity-dependent Hessians") {
  fs::path spec = scratch_dir() / "quartic.alg";
  std::ofstream(spec) << R"({
    "name": "quartic",
    "base": ["t", "x"],
    "fiber": ["y1"],
    "anchor": {"rho0": ["1", "0"], "rho": [["0"], ["1"]]},
    "structure": {"C0": {}, "C": {}},
    "lagrangian": "y1^2/2 + y1^4/4 - x^2/2"
  })";
  RunResult r = run("derive " + spec.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("implicit") != std::string::npos);

  RunResult rj = run("derive " + spec.string() + " --json");
  CHECK(rj.exit_code == 0);
  CHECK(rj.output.find("\"implicit\": true") != std::string::npos);
}

TEST_CASE("singular Lagrangians exit with a mathematical failure") {
  fs::path spec = scratch_dir() / "singular.alg";
  std::ofstream(spec) << R"({
    "name": "singular",
    "base": ["t", "x"],
    "fiber": ["y1"],
    "anchor": {"rho0": ["1", "0"], "rho": [["0"], ["1"]]},
    "structure": {"C0": {}, "C": {}},
    "lagrangian": "x*y1"
  })";
  RunResult r = run("derive " + spec.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("singular") != std::string::npos);
}

TEST_CASE("lift emits JSON coefficient maps") {
  RunResult r = run("lift " + fix("euler_top.alg") + " --coeffs 1,0,0,0 --json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"complete\"") != std::string::npos);
  CHECK(r.output.find("\"vertical\"") != std::string::npos);
  // e0^V = -y^alpha V_alpha
  CHECK(r.output.find("\"V1\": \"-y1\"") != std::string::npos);
}

TEST_CASE("integrate euler top prints a conservation summary") {
  fs::path out = scratch_dir() / "top.csv";
  RunResult r = run("integrate " + fix("euler_top.alg") + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("monitors") != std::string::npos);
  CHECK(r.output.find("energy") != std::string::npos);
  CHECK(r.output.find("momentum_sq") != std::string::npos);
}

TEST_CASE("aborted integration exits with a mathematical failure") {
  fs::path spec = scratch_dir() / "blowup.alg";
  std::ofstream(spec) << R"json({
    "name": "blowup",
    "base": ["t", "x"],
    "fiber": ["y1"],
    "anchor": {"rho0": ["1", "0"], "rho": [["0"], ["1"]]},
    "structure": {"C0": {}, "C": {}},
    "lagrangian": "y1^2/2 + exp(x)",
    "integrate": {"initial": {"t": 0, "x": 1, "y1": 1}, "t0": 0, "t1": 40, "h": 0.01}
  })json";
  fs::path out = scratch_dir() / "blowup.csv";
  RunResult r = run("integrate " + spec.string() + " --out " + out.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("aborted") != std::string::npos);
  // the partial trajectory was still written
  std::ifstream in(out);
  CHECK(in.good());
}

TEST_CASE("export-forms prints Cartan coefficients") {
  RunResult r = run("export-forms " + fix("canonical_j1.alg"));
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Theta_L[X0]") != std::string::npos);
  CHECK(r.output.find("Omega_L[") != std::string::npos);
}

TEST_CASE("seeded runs are byte-identical") {
  fs::path o1 = scratch_dir() / "run1.json";
  fs::path o2 = scratch_dir() / "run2.json";
  std::string base = "validate " + fix("broken_jacobi.alg") + " --json --seed 7 --out ";
  RunResult r1 = run(base + o1.string());
  RunResult r2 = run(base + o2.string());
  CHECK(r1.exit_code == 1);
  CHECK(r2.exit_code == 1);
  std::ifstream f1(o1), f2(o2);
  std::ostringstream b1, b2;
  b1 << f1.rdbuf();
  b2 << f2.rdbuf();
  REQUIRE_FALSE(b1.str().empty());
  CHECK(b1.str() == b2.str());
}
