#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "affalg/lagrangian.hpp"
#include "affalg/specfile.hpp"
#include "affalg/validate.hpp"

using namespace affalg;

namespace {

std::string fix(const std::string& name) {
  return std::string(AFFALG_FIXTURE_DIR) + "/" + name;
}

const std::vector<std::string> kPositive = {
    "canonical_j1.alg", "trivial_vectorfield.alg", "affine_liealgebra_point.alg",
    "euler_top.alg"};

}  // namespace

TEST_CASE("fixture files load and validate") {
  for (const auto& name : kPositive) {
    AlgebroidSpecFile spec = AlgebroidSpecFile::load(fix(name));
    AffinePtr alg = spec.build();
    ValidationReport r = validate(alg);
    CHECK_MESSAGE(r.all_passed(), name, ":\n", r.to_text());
  }
  AlgebroidSpecFile broken = AlgebroidSpecFile::load(fix("broken_jacobi.alg"));
  ValidationReport r = validate(broken.build());
  CHECK_FALSE(r.all_passed());
}

TEST_CASE("fixture shapes") {
  auto canon = AlgebroidSpecFile::load(fix("canonical_j1.alg"));
  auto alg = canon.build();
  CHECK(alg->name() == "canonical_j1");
  CHECK(alg->chart().size() == 2);
  CHECK(alg->fiber_dim() == 1);
  REQUIRE(canon.lagrangian.has_value());
  REQUIRE(canon.integrate.has_value());
  CHECK(canon.integrate->h == doctest::Approx(1e-3));

  auto top = AlgebroidSpecFile::load(fix("euler_top.alg")).build();
  CHECK(top->chart().size() == 0);
  CHECK(top->fiber_dim() == 3);
  CHECK(is_zero(top->c(3, 1, 2) - Expr::one()).is_zero());
  CHECK(is_zero(top->c(3, 2, 1) + Expr::one()).is_zero());  // skew accessor
}

TEST_CASE("round-trip: load -> build -> serialize -> load is stable") {
  for (const auto& name : kPositive) {
    AlgebroidSpecFile spec1 = AlgebroidSpecFile::load(fix(name));
    AffinePtr alg1 = spec1.build();
    AlgebroidSpecFile spec2 = AlgebroidSpecFile::from_algebroid(alg1, spec1);
    AffinePtr alg2 = AlgebroidSpecFile::from_json_text(spec2.to_json_text()).build();

    // identical validation verdicts, axiom by axiom
    ValidationReport r1 = validate(alg1);
    ValidationReport r2 = validate(alg2);
    REQUIRE(r1.checks.size() == r2.checks.size());
    for (std::size_t i = 0; i < r1.checks.size(); ++i) {
      CHECK(r1.checks[i].axiom == r2.checks[i].axiom);
      CHECK(r1.checks[i].result.state == r2.checks[i].result.state);
    }

    // identical derived forces (expression equivalence through is_zero)
    if (spec1.lagrangian && alg1->fiber_dim() > 0) {
      auto P1 = ProlongedAlgebroid::make(alg1);
      auto P2 = ProlongedAlgebroid::make(alg2);
      LagrangianSystem s1(P1, *spec1.lagrangian_expr(alg1));
      LagrangianSystem s2(P2, *spec2.lagrangian_expr(alg2));
      auto f1 = s1.derive_sode().forces();
      auto f2 = s2.derive_sode().forces();
      REQUIRE(f1.size() == f2.size());
      for (std::size_t a = 0; a < f1.size(); ++a)
        CHECK(is_zero(f1[a] - f2[a]).is_zero());
    }
  }
}

TEST_CASE("spec file error reporting") {
  CHECK_THROWS_AS(AlgebroidSpecFile::load("/nonexistent/file.alg"), SpecFileError);
  CHECK_THROWS_AS(AlgebroidSpecFile::from_json_text("not json"), SpecFileError);
  CHECK_THROWS_AS(AlgebroidSpecFile::from_json_text("[1,2]"), SpecFileError);

  auto with = [](const std::string& patch) {
    return "{\"name\":\"x\",\"base\":[\"x\"],\"fiber\":[\"y1\"]," + patch + "}";
  };
  // malformed structure keys
  CHECK_THROWS_AS(AlgebroidSpecFile::from_json_text(
                      with("\"anchor\":{\"rho0\":[\"0\"],\"rho\":[[\"1\"]]},"
                           "\"structure\":{\"C\":{\"1,2,1\":\"1\"}}"))
                      .build(),
                  SpecFileError);  // alpha >= beta
  CHECK_THROWS_AS(AlgebroidSpecFile::from_json_text(
                      with("\"anchor\":{\"rho0\":[\"0\"],\"rho\":[[\"1\"]]},"
                           "\"structure\":{\"C0\":{\"0,1\":\"1\"}}"))
                      .build(),
                  SpecFileError);  // index 0 out of range
  // expression error carries the field and offset
  try {
    AlgebroidSpecFile::from_json_text(
        with("\"anchor\":{\"rho0\":[\"1 + zz\"],\"rho\":[[\"0\"]]}"))
        .build();
    FAIL("expected SpecFileError");
  } catch (const SpecFileError& e) {
    CHECK(std::string(e.what()).find("rho0[0]") != std::string::npos);
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
  // shape mismatches
  CHECK_THROWS_AS(AlgebroidSpecFile::from_json_text(
                      with("\"anchor\":{\"rho0\":[\"0\",\"0\"],\"rho\":[[\"1\"]]}"))
                      .build(),
                  SpecFileError);
  // lagrangian over undeclared variables
  auto spec = AlgebroidSpecFile::from_json_text(
      with("\"anchor\":{\"rho0\":[\"0\"],\"rho\":[[\"1\"]]},\"lagrangian\":\"q\""));
  auto alg = spec.build();
  CHECK_THROWS_AS(spec.lagrangian_expr(alg), SpecFileError);
  // duplicate coordinate names
  CHECK_THROWS_AS(
      AlgebroidSpecFile::from_json_text(
          "{\"name\":\"d\",\"base\":[\"x\",\"x\"],\"fiber\":[],"
          "\"anchor\":{\"rho0\":[\"0\",\"0\"],\"rho\":[[],[]]}}")
          .build(),
      SpecFileError);
  CHECK_THROWS_AS(
      AlgebroidSpecFile::from_json_text(
          "{\"name\":\"d\",\"base\":[\"x\"],\"fiber\":[\"x\"],"
          "\"anchor\":{\"rho0\":[\"0\"],\"rho\":[[\"1\"]]}}")
          .build(),
      SpecFileError);
}
