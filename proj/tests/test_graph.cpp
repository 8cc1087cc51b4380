#include <doctest.h>

#include "ars2d/fixtures.hpp"
#include "ars2d/graph.hpp"
#include "support.hpp"

using namespace ars2d;
using testing_support::load_graph;

TEST_CASE("canonical cycle") {
  CHECK(canonical_cycle({-1, -1, 1, -1}) == SignCycle{-1, -1, -1, 1});
  CHECK(canonical_cycle({}) == SignCycle{});
  CHECK(canonical_cycle({1}) == SignCycle{1});
  CHECK(canonical_cycle({1, -1, 1, 1, -1, -1}) == SignCycle{-1, -1, 1, -1, 1, 1});
  CHECK(canonical_cycle({1, 1, -1, -1, 1, -1}) == canonical_cycle({1, -1, 1, 1, -1, -1}));
  CHECK(canonical_cycle({1, -1, -1, 1, 1, -1}) != canonical_cycle({1, -1, 1, 1, -1, -1}));
  CHECK(canonical_cycle({1, -1, 1, -1}) == SignCycle{-1, 1, -1, 1});
}

TEST_CASE("flip") {
  const LabelledGraph g1 = load_graph("fig1");
  const LabelledGraph f = flip(g1);
  for (const auto& v : f.vertices) CHECK(v.sign == -g1.find_vertex(v.id)->sign);
  bool found = false;
  for (const auto& e : f.edges) {
    if (e.id == "b") {
      CHECK(e.cycle == canonical_cycle({1, -1, 1, 1}));
      CHECK(e.alpha == "Q");
      CHECK(e.omega == "A");
      found = true;
    }
    if (e.id == "c") CHECK(e.cycle == SignCycle{-1});
  }
  CHECK(found);
  CHECK(flip(flip(g1)) == g1);
}

TEST_CASE("equivalence of the genus-4 example graphs") {
  const auto a = equivalent(load_graph("fig3a"), load_graph("fig3b"));
  REQUIRE(a);
  CHECK_FALSE(a->flipped);
  CHECK(verify_witness(load_graph("fig3a"), load_graph("fig3b"), *a));

  CHECK_FALSE(equivalent(load_graph("fig3a"), load_graph("fig3c")));

  const auto b = equivalent(load_graph("fig1"), load_graph("fig5"));
  REQUIRE(b);
  CHECK(b->flipped);
  CHECK(verify_witness(load_graph("fig1"), load_graph("fig5"), *b));
  CHECK(b->vertex_map.at("A") == "v1");
  CHECK(b->edge_map.at("f") == "e6");
}

TEST_CASE("witness verification rejects tampering") {
  const LabelledGraph g1 = load_graph("fig1"), g5 = load_graph("fig5");
  auto w = *equivalent(g1, g5);
  CHECK(verify_witness(g1, g5, w));
  auto bad = w;
  std::swap(bad.edge_map["a"], bad.edge_map["e"]);
  CHECK_FALSE(verify_witness(g1, g5, bad));
  bad = w;
  bad.flipped = false;
  CHECK_FALSE(verify_witness(g1, g5, bad));
}

TEST_CASE("equivalence respects edge endpoints") {
  // Same vertex labels and cycles; only the M+ end of the (+1) edge differs.
  LabelledGraph g{{{"m", -1, 0}, {"p", 1, 0}, {"q", 1, 0}}, {{"e", "m", "p", {}}, {"f", "m", "q", {1}}}};
  LabelledGraph h{{{"m", -1, 0}, {"p", 1, 0}, {"q", 1, 0}}, {{"e", "m", "p", {}}, {"f", "m", "p", {1}}}};
  CHECK_FALSE(equivalent(g, h));
  CHECK(equivalent(g, g));
}

TEST_CASE("euler number and total chi") {
  CHECK(euler_number(load_graph("fig1")) == 3);
  CHECK(euler_number(load_graph("fig5")) == -3);
  CHECK(total_chi(load_graph("fig1")) == -6);
  CHECK(total_chi(load_graph("fig3a")) == -6);
  CHECK(euler_number(LabelledGraph{{{"s", 1, 2}}, {}}) == 2);
  CHECK(cycle_sum({1, 1, -1}) == 1);
}

TEST_CASE("build_graph on torus fixtures") {
  {
    const Structure s(fixture("grushin-torus"));
    const LabelledGraph g = build_graph(s, analyze_locus(s, 256), 256);
    REQUIRE(g.vertices.size() == 2);
    CHECK(g.edges.size() == 2);
    for (const auto& v : g.vertices) CHECK(v.chi == 0);
    CHECK(g.vertices[0].sign != g.vertices[1].sign);
    for (const auto& e : g.edges) CHECK(e.cycle.empty());
    CHECK(euler_number(g) == 0);
  }
  {
    const Structure s(fixture("tangency-torus"));
    const LabelledGraph g = build_graph(s, analyze_locus(s, 256), 256);
    REQUIRE(g.vertices.size() == 2);
    REQUIRE(g.edges.size() == 2);
    for (const auto& e : g.edges) CHECK(e.cycle == SignCycle{-1, 1});
    CHECK(euler_number(g) == 0);
  }
  {
    ArsSpec spec = fixture("riemannian-torus");
    for (int o : {1, -1}) {
      spec.orientation = o;
      const Structure s(spec);
      const LabelledGraph g = build_graph(s, analyze_locus(s, 64), 64);
      REQUIRE(g.vertices.size() == 1);
      CHECK(g.vertices[0].sign == o);
      CHECK(g.vertices[0].chi == 0);
      CHECK(g.edges.empty());
    }
  }
  const Structure plane(fixture("F3"));
  CHECK_THROWS_AS(build_graph(plane, {}, 64), InvalidInput);
}

TEST_CASE("graph JSON") {
  const LabelledGraph g = load_graph("fig1");
  const std::string text = graph_to_json_text(g);
  CHECK(graph_to_json_text(graph_from_json(nlohmann::json::parse(text))) == text);
  CHECK(graph_from_json(nlohmann::json::parse(text)) == g);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(R"({"vertices": []})")), InvalidInput);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(
                      R"({"vertices": [{"id": "a", "sign": 1, "chi": 0}, {"id": "b", "sign": 1, "chi": 0}],
                          "edges": [{"id": "e", "alpha": "a", "omega": "b", "cycle": []}]})")),
                  InvalidInput);
  CHECK_THROWS_AS(graph_from_json(nlohmann::json::parse(
                      R"({"vertices": [{"id": "a", "sign": -1, "chi": 0}, {"id": "b", "sign": 1, "chi": 0}],
                          "edges": [{"id": "e", "alpha": "a", "omega": "b", "cycle": [2]}]})")),
                  InvalidInput);
}

TEST_CASE("DOT export") {
  const std::string dot = graph_to_dot(load_graph("fig1"));
  for (const char* label : {"\"+1,1\"", "\"+1,-2\"", "\"+1,0\"", "\"-1,-2\"", "\"-1,0\"", "\"-1,-4\"",
                            "\"(-1,-1,-1,+1)\"", "\"(+1)\"", "\"(-1,-1)\""}) {
    CHECK_MESSAGE(dot.find(label) != std::string::npos, label);
  }
  CHECK(dot.rfind("digraph ars {\n", 0) == 0);
  CHECK(dot == graph_to_dot(load_graph("fig1")));
}
