#include <catch2/catch_amalgamated.hpp>

#include "twobody/suites.hpp"

using namespace twobody;

TEST_CASE("report pass/fail logic and findings", "[report]") {
  Report rep;
  rep.suite = "demo";
  rep.check("a", 1e-12, 1e-10);
  REQUIRE(rep.overall_pass());
  rep.finding("b", 0.5, "informational only");
  REQUIRE(rep.overall_pass());
  rep.check("c", 1e-3, 1e-10);
  REQUIRE_FALSE(rep.overall_pass());
  REQUIRE(rep.count(false, false) == 1);
  REQUIRE(rep.findings_count() == 1);
  const json j = rep.to_json();
  REQUIRE(j["schema"] == 1);
  REQUIRE(j["summary"]["failed"] == 1);
  REQUIRE(j["summary"]["overall_pass"] == false);
  REQUIRE(j.contains("timestamp"));
  REQUIRE_FALSE(rep.to_json(false).contains("timestamp"));
}

TEST_CASE("matrix dump round trip", "[report]") {
  const ComplexMatrix g = gamma8().gamma(3);
  const ComplexMatrix back = matrix_from_json(matrix_to_json(g));
  REQUIRE(max_abs(g - back) == 0.0);
}

TEST_CASE("residual report serialization carries the schema fields", "[report]") {
  const TwoBodyParams params = TwoBodyParams::equal_mass(2.0);
  const DiffOp p1 = DiffOp::momentum(1, 8);
  const auto pts = sample_momenta(3, kDefaultSeed, params, 2.0);
  const json j = residual_report_to_json(op_equal_at(p1, p1, pts, 1e-12, "p1_vs_p1"));
  REQUIRE(j["relation"] == "p1_vs_p1");
  REQUIRE(j["pass"] == true);
  for (const auto& e : j["entries"]) {
    REQUIRE(e.contains("point"));
    REQUIRE(e.contains("order"));
    REQUIRE(e.contains("residual"));
    REQUIRE(e.contains("tol"));
    REQUIRE(e.contains("pass"));
  }
}

TEST_CASE("suite reports are deterministic given the seed", "[report]") {
  SuiteConfig cfg;
  cfg.points = 20;
  const std::string a = run_suite("kinematics", cfg).to_json(false).dump();
  const std::string b = run_suite("kinematics", cfg).to_json(false).dump();
  REQUIRE(a == b);

  SuiteConfig other = cfg;
  other.seed = 0xBEEF;
  const std::string c = run_suite("kinematics", other).to_json(false).dump();
  REQUIRE(a != c);  // the seed is live, not decorative
}

TEST_CASE("unattainable tolerance override fails the suite but keeps residuals", "[report]") {
  SuiteConfig cfg;
  cfg.points = 10;
  cfg.tol_override = 1e-30;
  const Report rep = run_suite("kinematics", cfg);
  REQUIRE_FALSE(rep.overall_pass());
  for (const auto& e : rep.entries)
    if (!e.finding) REQUIRE(std::isfinite(e.residual));
}

TEST_CASE("unknown suite is a usage error", "[report]") {
  REQUIRE_THROWS_AS(run_suite("nope", SuiteConfig{}), std::invalid_argument);
}

TEST_CASE("velocity suite report round-trips through JSON", "[report]") {
  SuiteConfig cfg;
  cfg.points = 12;
  const json j = run_suite("velocity", cfg).to_json(false);
  const json back = json::parse(j.dump());
  REQUIRE(back == j);
  REQUIRE(back["suite"] == "velocity");
}
