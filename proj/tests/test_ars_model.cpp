#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>

#include "ars2d/fixtures.hpp"
#include "ars2d/h0.hpp"

using namespace ars2d;

namespace {

VectorField vf(const char* a, const char* b) { return VectorField::parse(a, b); }

void check_field(const VectorField& f, Vec2 p, Vec2 want) {
  const Vec2 v = f.eval(p);
  CHECK(v.x == doctest::Approx(want.x));
  CHECK(v.y == doctest::Approx(want.y));
}

ArsSpec plane_spec(const char* y2) {
  ArsSpec s;
  s.chart = SurfaceChart::plane(-1, 1, -1, 1);
  s.X = vf("1", "0");
  s.Y = vf("0", y2);
  return s;
}

}  // namespace

TEST_CASE("lie brackets") {
  check_field(lie_bracket(vf("1", "0"), vf("0", "x")), {0.3, -0.2}, {0, 1});
  check_field(lie_bracket(vf("1", "0"), vf("0", "y - x^2")), {0.3, 0.1}, {0, -0.6});
  const VectorField v = vf("sin(y)", "x*y");
  check_field(lie_bracket(v, v), {0.4, 0.7}, {0, 0});
}

TEST_CASE("frame determinant") {
  CHECK(det_frame(fixture("grushin-plane")) == parse("x"));
  CHECK(det_frame(fixture("F3")) == parse("y - x^2"));
  CHECK(det_frame(fixture("riemannian-torus")) == Expr::number(1));
}

TEST_CASE("normal form classification at the origin") {
  CHECK(classify_point(fixture("F1"), {0, 0}) == PointClass::Ordinary);
  CHECK(classify_point(fixture("F1"), {0.4, -0.9}) == PointClass::Ordinary);
  CHECK(classify_point(fixture("F2"), {0, 0}) == PointClass::Grushin);
  CHECK(classify_point(fixture("F2"), {0, 0.3}) == PointClass::Grushin);
  CHECK(classify_point(fixture("F3"), {0, 0}) == PointClass::Tangency);
  CHECK(classify_point(fixture("F3"), {0.5, 0.25}) == PointClass::Grushin);
  CHECK(classify_point(fixture("F3"), {0.5, 0.0}) == PointClass::Ordinary);
}

TEST_CASE("normal forms with non-default functions") {
  NormalFormParams p;
  p.phi = "x*y";
  p.psi = "1 + x^2";
  p.xi = "0.3*y";
  CHECK(classify_point(fixture("F1", p), {0, 0}) == PointClass::Ordinary);
  CHECK(classify_point(fixture("F2", p), {0, 0.2}) == PointClass::Grushin);
  CHECK(classify_point(fixture("F3", p), {0, 0}) == PointClass::Tangency);
}

TEST_CASE("a point without a full third flag is degenerate") {
  CHECK_THROWS_AS(classify_point(plane_spec("y - x^3"), {0, 0}), DegeneratePoint);
}

TEST_CASE("metric cost") {
  const ArsSpec g = fixture("grushin-plane");
  CHECK(metric_cost(g, {2, 0}, {0, 1}) == doctest::Approx(0.25));
  CHECK(metric_cost(g, {0.5, 0.3}, g.X.eval({0.5, 0.3})) == doctest::Approx(1.0));
  CHECK(metric_cost(g, {0.5, 0.3}, {1, 1}) == doctest::Approx(1 + 4.0));
  CHECK(std::isinf(metric_cost(g, {0, 0}, {0, 1})));
  CHECK(metric_cost(g, {0, 0}, {-3, 0}) == doctest::Approx(9.0));
  CHECK(metric_cost(g, {0, 0}, {0, 0}) == 0.0);
}

TEST_CASE("spec JSON round trip and validation") {
  for (const auto& name : fixture_names()) {
    const ArsSpec s = fixture(name);
    const ArsSpec back = spec_from_json(spec_to_json(s));
    CHECK(spec_to_json(back) == spec_to_json(s));
  }
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"surface": {"type": "sphere"}})")), InvalidInput);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(
                      R"({"surface": {"type": "torus", "periods": [1, 0]}, "frame": {"X": ["1","0"], "Y": ["0","1"]}})")),
                  InvalidInput);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(
                      R"({"surface": {"type": "torus", "periods": [1, 1]}, "frame": {"X": ["1","0"], "Y": ["0","q"]}})")),
                  ParseError);
}

TEST_CASE("validate rejects non-periodic and non-generating frames") {
  ArsSpec s = fixture("grushin-torus");
  s.Y = vf("0", "x");
  CHECK_THROWS_AS(validate(Structure(s)), InvalidInput);
  ArsSpec flat = plane_spec("0");
  CHECK_THROWS_AS(validate(Structure(flat)), InvalidInput);
  CHECK_NOTHROW(validate(Structure(fixture("tangency-torus"))));
}

TEST_CASE("hypothesis H0") {
  for (const char* name : {"grushin-torus", "tangency-torus", "riemannian-torus"}) {
    const Structure s(fixture(name));
    CHECK_MESSAGE(check_H0(s, analyze_locus(s)).pass(), name);
  }
  const Structure bad(plane_spec("x^2"));
  const H0Report r = check_H0(bad, trace_locus(bad));
  REQUIRE_FALSE(r.pass());
  CHECK(r.failures.front().condition == H0Condition::Embedded);
}

TEST_CASE("tolerance scale from the environment") {
  ::setenv("ARS2D_TOL_SCALE", "10", 1);
  const Tolerances t = Tolerances::from_env();
  ::unsetenv("ARS2D_TOL_SCALE");
  CHECK(t.det == doctest::Approx(1e-7));
  CHECK(t.rank == doctest::Approx(1e-5));
  CHECK(Tolerances::from_env().det == doctest::Approx(1e-8));
}
