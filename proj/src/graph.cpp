#include "ars2d/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

namespace ars2d {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Labels

SignCycle canonical_cycle(const SignCycle& seq) {
  const std::size_t n = seq.size();
  if (n == 0) return {};
  // Booth's least-rotation algorithm over the doubled sequence.
  std::vector<int> s(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) s[i] = seq[i % n];
  std::vector<long> f(2 * n, -1);
  long k = 0;
  for (long j = 1; j < static_cast<long>(2 * n); ++j) {
    const int sj = s[j];
    long i = f[j - k - 1];
    while (i != -1 && sj != s[k + i + 1]) {
      if (sj < s[k + i + 1]) k = j - i - 1;
      i = f[i];
    }
    if (sj != s[k + i + 1]) {
      if (sj < s[k]) k = j;
      f[j - k] = -1;
    } else {
      f[j - k] = i + 1;
    }
  }
  SignCycle out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = seq[(k + i) % n];
  return out;
}

int cycle_sum(const SignCycle& c) { return std::accumulate(c.begin(), c.end(), 0); }

std::string cycle_to_string(const SignCycle& c) {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ',';
    out += c[i] > 0 ? "+1" : "-1";
  }
  return out + ")";
}

const GraphVertex* LabelledGraph::find_vertex(const std::string& id) const {
  for (const auto& v : vertices) {
    if (v.id == id) return &v;
  }
  return nullptr;
}

void LabelledGraph::check() const {
  std::set<std::string> ids;
  for (const auto& v : vertices) {
    if (!ids.insert(v.id).second) throw InvalidInput("duplicate vertex id '" + v.id + "'");
    if (v.sign != 1 && v.sign != -1) throw InvalidInput("vertex '" + v.id + "' has sign other than +-1");
  }
  std::set<std::string> edge_ids;
  for (const auto& e : edges) {
    if (!edge_ids.insert(e.id).second) throw InvalidInput("duplicate edge id '" + e.id + "'");
    const GraphVertex* a = find_vertex(e.alpha);
    const GraphVertex* w = find_vertex(e.omega);
    if (!a || !w) throw InvalidInput("edge '" + e.id + "' has a dangling endpoint");
    if (a->sign != -1 || w->sign != +1) {
      throw InvalidInput("edge '" + e.id + "' must run from a -1 vertex to a +1 vertex");
    }
    for (int c : e.cycle) {
      if (c != 1 && c != -1) throw InvalidInput("edge '" + e.id + "' has a cycle entry other than +-1");
    }
  }
}

LabelledGraph LabelledGraph::normalized() const {
  LabelledGraph g = *this;
  std::sort(g.vertices.begin(), g.vertices.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  std::sort(g.edges.begin(), g.edges.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (auto& e : g.edges) e.cycle = canonical_cycle(e.cycle);
  return g;
}

LabelledGraph flip(const LabelledGraph& g) {
  LabelledGraph out = g;
  for (auto& v : out.vertices) v.sign = -v.sign;
  for (auto& e : out.edges) {
    std::swap(e.alpha, e.omega);
    SignCycle c(e.cycle.rbegin(), e.cycle.rend());
    for (int& x : c) x = -x;
    e.cycle = canonical_cycle(c);
  }
  return out;
}

int euler_number(const LabelledGraph& g) {
  int total = 0;
  for (const auto& v : g.vertices) total += v.sign * v.chi;
  for (const auto& e : g.edges) total += cycle_sum(e.cycle);
  return total;
}

int total_chi(const LabelledGraph& g) {
  int total = 0;
  for (const auto& v : g.vertices) total += v.chi;
  return total;
}

// ---------------------------------------------------------------------------
// Equivalence

namespace {

struct Indexed {
  std::vector<GraphVertex> vertices;
  std::vector<GraphEdge> edges;
  std::vector<int> alpha;
  std::vector<int> omega;
  // (alpha, omega) -> edge indices sorted by canonical cycle
  std::map<std::pair<int, int>, std::vector<int>> bundles;
  std::vector<std::string> signature;

  explicit Indexed(const LabelledGraph& g) : vertices(g.vertices), edges(g.edges) {
    std::map<std::string, int> index;
    for (std::size_t i = 0; i < vertices.size(); ++i) index[vertices[i].id] = static_cast<int>(i);
    for (auto& e : edges) e.cycle = canonical_cycle(e.cycle);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      alpha.push_back(index.at(edges[k].alpha));
      omega.push_back(index.at(edges[k].omega));
      bundles[{alpha.back(), omega.back()}].push_back(static_cast<int>(k));
    }
    for (auto& [key, list] : bundles) {
      std::sort(list.begin(), list.end(), [&](int a, int b) { return edges[a].cycle < edges[b].cycle; });
    }
    // Vertex invariant: labels plus the multiset of incident edge labels by role.
    signature.resize(vertices.size());
    std::vector<std::vector<std::string>> incident(vertices.size());
    for (std::size_t k = 0; k < edges.size(); ++k) {
      incident[alpha[k]].push_back("a" + cycle_to_string(edges[k].cycle));
      incident[omega[k]].push_back("w" + cycle_to_string(edges[k].cycle));
    }
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      std::sort(incident[i].begin(), incident[i].end());
      std::ostringstream os;
      os << vertices[i].sign << ',' << vertices[i].chi << ';' << incident[i].size();
      for (const auto& s : incident[i]) os << ';' << s;
      signature[i] = os.str();
    }
  }

  std::vector<SignCycle> bundle_cycles(int a, int w) const {
    std::vector<SignCycle> out;
    auto it = bundles.find({a, w});
    if (it == bundles.end()) return out;
    for (int k : it->second) out.push_back(edges[k].cycle);
    return out;
  }
};

std::optional<EquivalenceWitness> match(const LabelledGraph& g1, const LabelledGraph& g2, bool flipped) {
  if (g1.vertices.size() != g2.vertices.size() || g1.edges.size() != g2.edges.size()) return std::nullopt;
  const Indexed a(g1);
  const Indexed b(g2);
  const int n = static_cast<int>(a.vertices.size());

  // Most constrained first: rarest signature in g2, then highest degree.
  std::map<std::string, int> freq;
  for (const auto& s : b.signature) ++freq[s];
  for (const auto& s : a.signature) {
    if (freq[s] == 0) return std::nullopt;
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return freq[a.signature[x]] < freq[a.signature[y]];
  });

  std::vector<int> u(n, -1);
  std::vector<bool> used(n, false);
  std::function<bool(int)> extend = [&](int depth) -> bool {
    if (depth == n) return true;
    const int v = order[depth];
    for (int w = 0; w < n; ++w) {
      if (used[w] || a.signature[v] != b.signature[w]) continue;
      bool ok = true;
      for (int d = 0; d < depth && ok; ++d) {
        const int v2 = order[d];
        const int w2 = u[v2];
        ok = a.bundle_cycles(v, v2) == b.bundle_cycles(w, w2) &&
             a.bundle_cycles(v2, v) == b.bundle_cycles(w2, w);
      }
      if (!ok) continue;
      u[v] = w;
      used[w] = true;
      if (extend(depth + 1)) return true;
      u[v] = -1;
      used[w] = false;
    }
    return false;
  };
  if (!extend(0)) return std::nullopt;

  EquivalenceWitness wit;
  wit.flipped = flipped;
  for (int v = 0; v < n; ++v) wit.vertex_map[a.vertices[v].id] = b.vertices[u[v]].id;
  for (const auto& [key, list] : a.bundles) {
    const auto& target = b.bundles.at({u[key.first], u[key.second]});
    for (std::size_t k = 0; k < list.size(); ++k) {
      wit.edge_map[a.edges[list[k]].id] = b.edges[target[k]].id;
    }
  }
  return wit;
}

}  // namespace

std::optional<EquivalenceWitness> equivalent(const LabelledGraph& g1, const LabelledGraph& g2) {
  if (auto w = match(g1, g2, false)) return w;
  return match(g1, flip(g2), true);
}

bool verify_witness(const LabelledGraph& g1, const LabelledGraph& g2, const EquivalenceWitness& w) {
  const LabelledGraph target = w.flipped ? flip(g2) : g2;
  if (w.vertex_map.size() != g1.vertices.size() || w.edge_map.size() != g1.edges.size()) return false;
  std::set<std::string> image;
  for (const auto& v : g1.vertices) {
    auto it = w.vertex_map.find(v.id);
    if (it == w.vertex_map.end()) return false;
    const GraphVertex* t = target.find_vertex(it->second);
    if (!t || t->sign != v.sign || t->chi != v.chi || !image.insert(t->id).second) return false;
  }
  std::set<std::string> edge_image;
  for (const auto& e : g1.edges) {
    auto it = w.edge_map.find(e.id);
    if (it == w.edge_map.end()) return false;
    auto t = std::find_if(target.edges.begin(), target.edges.end(), [&](const auto& x) { return x.id == it->second; });
    if (t == target.edges.end() || !edge_image.insert(t->id).second) return false;
    if (canonical_cycle(t->cycle) != canonical_cycle(e.cycle)) return false;
    if (w.vertex_map.at(e.alpha) != t->alpha || w.vertex_map.at(e.omega) != t->omega) return false;
  }
  return image.size() == target.vertices.size() && edge_image.size() == target.edges.size();
}

// ---------------------------------------------------------------------------
// Construction from a traced structure

namespace {

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

LabelledGraph build_graph(const Structure& s, const std::vector<SingularCurve>& curves, int resolution) {
  if (!s.chart().is_torus()) throw InvalidInput("the labelled graph is defined for torus charts only");
  const Lattice lat = Lattice::over(s.chart(), resolution);
  const std::vector<double> det = sample_scalar(s.det(), lat, Exec::Parallel);
  const int n = lat.nx;
  const int m = lat.ny;
  auto id = [&](int i, int j) {
    lat.normalize(i, j);
    return static_cast<int>(lat.index(i, j));
  };
  auto pos = [&](int i, int j) { return det[id(i, j)] >= 0.0; };

  DisjointSets sets(lat.size());
  // Saddle cells joined along a diagonal.
  std::vector<std::pair<int, int>> diagonals;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      if (pos(i, j) == pos(i + 1, j)) sets.unite(id(i, j), id(i + 1, j));
      if (pos(i, j) == pos(i, j + 1)) sets.unite(id(i, j), id(i, j + 1));
      const bool p0 = pos(i, j), p1 = pos(i + 1, j), p2 = pos(i + 1, j + 1), p3 = pos(i, j + 1);
      if (p0 == p2 && p1 == p3 && p0 != p1) {
        if (saddle_joins_c0(s, lat, i, j)) {
          diagonals.emplace_back(id(i, j), id(i + 1, j + 1));
        } else {
          diagonals.emplace_back(id(i + 1, j), id(i, j + 1));
        }
        sets.unite(diagonals.back().first, diagonals.back().second);
      }
    }
  }

  // Component numbering in raster order of first node.
  std::map<int, int> comp_of_root;
  std::vector<int> comp(lat.size());
  for (std::size_t k = 0; k < lat.size(); ++k) {
    const int root = sets.find(static_cast<int>(k));
    auto it = comp_of_root.emplace(root, static_cast<int>(comp_of_root.size())).first;
    comp[k] = it->second;
  }
  const std::size_t ncomp = comp_of_root.size();
  std::vector<long> V(ncomp, 0), E(ncomp, 0), F(ncomp, 0);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c = comp[id(i, j)];
      ++V[c];
      if (comp[id(i + 1, j)] == c) ++E[c];
      if (comp[id(i, j + 1)] == c) ++E[c];
      if (comp[id(i + 1, j)] == c && comp[id(i + 1, j + 1)] == c && comp[id(i, j + 1)] == c) ++F[c];
    }
  }
  for (const auto& [a, b] : diagonals) ++E[comp[a]];

  const bool plus_is_positive = s.orientation() > 0;
  LabelledGraph g;
  std::vector<int> sign(ncomp, 0);
  for (std::size_t k = 0; k < lat.size(); ++k) {
    sign[comp[k]] = ((det[k] >= 0.0) == plus_is_positive) ? +1 : -1;
  }
  for (std::size_t c = 0; c < ncomp; ++c) {
    g.vertices.push_back({"M" + std::to_string(c), sign[c], static_cast<int>(V[c] - E[c] + F[c])});
  }

  // Each segment reads the components a little way off either side along
  // the gradient of det; the majority reading wins. Nodes lying on the curve
  // itself (det exactly zero) are why a single cell is not enough.
  auto nearest = [&](Vec2 q) {
    return id(static_cast<int>(std::lround((q.x - lat.origin.x) / lat.hx)),
              static_cast<int>(std::lround((q.y - lat.origin.y) / lat.hy)));
  };
  const double reach = 0.75 * std::max(lat.hx, lat.hy);
  for (const SingularCurve& w : curves) {
    std::map<std::pair<int, int>, int> votes;
    int total = 0;
    const std::size_t segs = w.closed ? w.size() : (w.size() > 0 ? w.size() - 1 : 0);
    for (std::size_t k = 0; k < segs; ++k) {
      const Vec2 mid = (w.points[k] + w.next(k, s.chart())) * 0.5;
      const Vec2 grad = s.det_gradient(mid);
      const double gn = norm(grad);
      if (gn == 0.0) continue;
      const Vec2 off = grad * (reach / gn);
      const int up = comp[nearest(s.chart().wrap(mid + off))];
      const int down = comp[nearest(s.chart().wrap(mid - off))];
      ++total;
      if (sign[up] == sign[down]) continue;
      ++votes[sign[up] > 0 ? std::pair{down, up} : std::pair{up, down}];
    }
    std::pair<int, int> best{-1, -1};
    int best_votes = 0;
    for (const auto& [pair, count] : votes) {
      if (count > best_votes) best = pair, best_votes = count;
    }
    if (total == 0 || 2 * best_votes <= total) {
      throw AdjacencyAmbiguous("singular curve " + std::to_string(w.id) +
                               " does not separate exactly one M- component from one M+ component");
    }
    const auto [a, b] = best;
    SignCycle cycle;
    for (const auto& t : w.tangencies) cycle.push_back(t.contribution);
    g.edges.push_back({"W" + std::to_string(w.id), "M" + std::to_string(a), "M" + std::to_string(b),
                       canonical_cycle(cycle)});
  }
  g.check();
  return g.normalized();
}

// ---------------------------------------------------------------------------
// Serialization

json graph_to_json(const LabelledGraph& g0) {
  const LabelledGraph g = g0.normalized();
  json vs = json::array();
  for (const auto& v : g.vertices) vs.push_back({{"id", v.id}, {"sign", v.sign}, {"chi", v.chi}});
  json es = json::array();
  for (const auto& e : g.edges) {
    es.push_back({{"id", e.id}, {"alpha", e.alpha}, {"omega", e.omega}, {"cycle", e.cycle}});
  }
  return {{"vertices", vs}, {"edges", es}};
}

LabelledGraph graph_from_json(const json& j) {
  LabelledGraph g;
  try {
    for (const auto& v : j.at("vertices")) {
      g.vertices.push_back({v.at("id").get<std::string>(), v.at("sign").get<int>(), v.at("chi").get<int>()});
    }
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({e.at("id").get<std::string>(), e.at("alpha").get<std::string>(),
                         e.at("omega").get<std::string>(), e.at("cycle").get<SignCycle>()});
    }
  } catch (const json::exception& ex) {
    throw InvalidInput(std::string("malformed graph JSON: ") + ex.what());
  }
  g.check();
  return g.normalized();
}

std::string graph_to_json_text(const LabelledGraph& g) { return graph_to_json(g).dump(2) + "\n"; }

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string graph_to_dot(const LabelledGraph& g0) {
  const LabelledGraph g = g0.normalized();
  std::ostringstream os;
  os << "digraph ars {\n";
  for (const auto& v : g.vertices) {
    os << "  " << quoted(v.id) << " [label=" << quoted((v.sign > 0 ? "+1," : "-1,") + std::to_string(v.chi))
       << "];\n";
  }
  for (const auto& e : g.edges) {
    const std::string label = e.cycle.empty() ? std::string() : cycle_to_string(e.cycle);
    os << "  " << quoted(e.alpha) << " -> " << quoted(e.omega) << " [id=" << quoted(e.id)
       << ", label=" << quoted(label) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace ars2d
