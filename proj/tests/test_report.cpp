#include <doctest.h>

#include "ars2d/report.hpp"
#include "support.hpp"

using namespace ars2d;
using testing_support::data_path;

TEST_CASE("tangency torus report") {
  const AnalysisReport r = analyze(fixture("tangency-torus"), 256);
  CHECK(r.h0.pass());
  CHECK(r.curves.size() == 2);
  std::size_t tangencies = 0;
  int sum = 0;
  for (const auto& c : r.curves) {
    tangencies += c.tangencies.size();
    for (const auto& t : c.tangencies) sum += t.contribution;
  }
  CHECK(tangencies == 4);
  CHECK(r.tau_total == sum);
  CHECK(r.tau_total == 0);
  REQUIRE(r.graph);
  CHECK(r.euler_number == euler_number(*r.graph));
  CHECK(r.euler_number == 0);
  CHECK(r.total_chi == 0);
}

TEST_CASE("grushin torus report") {
  const AnalysisReport r = analyze(fixture("grushin-torus"), 256);
  CHECK(r.h0.pass());
  CHECK(r.curves.size() == 2);
  for (const auto& c : r.curves) CHECK(c.tangencies.empty());
  REQUIRE(r.graph);
  for (const auto& e : r.graph->edges) CHECK(e.cycle.empty());
}

TEST_CASE("plane charts have no graph; failures are reported, not thrown") {
  const AnalysisReport f3 = analyze(fixture("F3"), 128);
  CHECK(f3.h0.pass());
  CHECK_FALSE(f3.graph);
  CHECK_FALSE(f3.euler_number);

  const Operand bad = load_operand(data_path("specs/x-squared.json"));
  const AnalysisReport r = analyze(*bad.spec, 128);
  CHECK_FALSE(r.h0.pass());
}

TEST_CASE("report JSON round trip and determinism") {
  for (const char* name : {"tangency-torus", "F3", "riemannian-torus"}) {
    const AnalysisReport r = analyze(fixture(name), 128);
    const std::string text = report_to_text(r);
    CHECK(report_to_text(report_from_json(nlohmann::json::parse(text))) == text);
    CHECK(report_to_text(analyze(fixture(name), 128)) == text);
  }
  CHECK_THROWS_AS(report_from_json(nlohmann::json::parse("{}")), InvalidInput);
}

TEST_CASE("digest identifies the structure") {
  CHECK(spec_digest(fixture("F3")) == spec_digest(fixture("F3")));
  CHECK(spec_digest(fixture("F3")) != spec_digest(fixture("F2")));
  CHECK(spec_digest(fixture("F3")).size() == 16);
}

TEST_CASE("operands") {
  CHECK(load_operand("F3").spec);
  CHECK(load_operand(data_path("graphs/fig1.json")).graph);
  const Operand tt = load_operand(data_path("specs/tangency-torus.json"));
  REQUIRE(tt.spec);
  CHECK(spec_to_json(*tt.spec) == spec_to_json(fixture("tangency-torus")));
  CHECK_THROWS_AS(load_operand("no-such-thing"), InvalidInput);
  CHECK_THROWS_AS(load_operand(data_path("specs/malformed.json")), InvalidInput);
}
