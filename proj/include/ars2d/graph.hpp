#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ars2d/locus.hpp"

#include <json.hpp>

namespace ars2d {

/// Cyclic sequence of tangency contributions, each -1 or +1.
using SignCycle = std::vector<int>;

struct GraphVertex {
  std::string id;
  int sign = +1;  // +1 for a component of M+, -1 for M-
  int chi = 0;    // Euler characteristic of the component
  bool operator==(const GraphVertex&) const = default;
};

struct GraphEdge {
  std::string id;
  std::string alpha;  // endpoint in M-
  std::string omega;  // endpoint in M+
  SignCycle cycle;    // least rotation
  bool operator==(const GraphEdge&) const = default;
};

/// Bipartite multigraph of a structure: one vertex per component of the
/// complement of the singular locus, one edge per singular curve.
struct LabelledGraph {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;

  const GraphVertex* find_vertex(const std::string& id) const;
  /// Throws InvalidInput on dangling endpoints, duplicate ids, bad signs or
  /// edges that do not run from an M- vertex to an M+ vertex.
  void check() const;
  /// Sorted by id, cycles canonical.
  LabelledGraph normalized() const;
  bool operator==(const LabelledGraph&) const = default;
};

struct EquivalenceWitness {
  bool flipped = false;
  std::map<std::string, std::string> vertex_map;  // u
  std::map<std::string, std::string> edge_map;    // k
};

class AdjacencyAmbiguous : public Error {
 public:
  using Error::Error;
};

/// Least rotation under -1 < +1 (Booth's algorithm).
SignCycle canonical_cycle(const SignCycle& seq);

/// The graph obtained by reversing the bundle orientation.
LabelledGraph flip(const LabelledGraph& g);

/// Label-preserving isomorphism commuting with alpha and omega, tried against
/// g2 first and then against flip(g2).
std::optional<EquivalenceWitness> equivalent(const LabelledGraph& g1, const LabelledGraph& g2);

/// True when `w` is a valid isomorphism from g1 onto g2 (or flip(g2)).
bool verify_witness(const LabelledGraph& g1, const LabelledGraph& g2, const EquivalenceWitness& w);

int euler_number(const LabelledGraph& g);
int total_chi(const LabelledGraph& g);
int cycle_sum(const SignCycle& c);

/// Components of M \ Z by flood fill on the lattice, Euler characteristics
/// from the cubical subcomplex, one edge per traced curve. Torus charts only.
LabelledGraph build_graph(const Structure& s, const std::vector<SingularCurve>& curves,
                          int resolution = kDefaultResolution);

nlohmann::json graph_to_json(const LabelledGraph& g);
LabelledGraph graph_from_json(const nlohmann::json& j);
/// Canonical text: normalized graph, sorted keys, two-space indent, trailing newline.
std::string graph_to_json_text(const LabelledGraph& g);
std::string graph_to_dot(const LabelledGraph& g);
std::string cycle_to_string(const SignCycle& c);

}  // namespace ars2d
