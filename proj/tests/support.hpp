#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "ars2d/graph.hpp"
#include "ars2d/report.hpp"

namespace testing_support {

inline std::string data_path(const std::string& rel) { return std::string(ARS2D_DATA_DIR) + "/" + rel; }

inline ars2d::LabelledGraph load_graph(const std::string& name) {
  std::ifstream in(data_path("graphs/" + name + ".json"));
  return ars2d::graph_from_json(nlohmann::json::parse(in));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Random bipartite multigraph with small labels.
inline ars2d::LabelledGraph random_graph(std::mt19937& rng) {
  std::uniform_int_distribution<int> count(1, 4), chi(-6, 2), len(0, 5), coin(0, 1), edges(0, 7);
  ars2d::LabelledGraph g;
  const int nm = count(rng), np = count(rng);
  for (int k = 0; k < nm; ++k) g.vertices.push_back({"m" + std::to_string(k), -1, chi(rng)});
  for (int k = 0; k < np; ++k) g.vertices.push_back({"p" + std::to_string(k), +1, chi(rng)});
  const int ne = edges(rng);
  for (int k = 0; k < ne; ++k) {
    ars2d::SignCycle c(len(rng));
    for (int& v : c) v = coin(rng) ? 1 : -1;
    g.edges.push_back({"e" + std::to_string(k), "m" + std::to_string(rng() % nm), "p" + std::to_string(rng() % np), c});
  }
  return g.normalized();
}

// Renames every id and rotates every stored cycle; the result is equivalent
// to g without flipping.
inline ars2d::LabelledGraph scramble(const ars2d::LabelledGraph& g, std::mt19937& rng) {
  std::vector<std::string> vnames, enames;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) vnames.push_back("v" + std::to_string(k));
  for (std::size_t k = 0; k < g.edges.size(); ++k) enames.push_back("x" + std::to_string(k));
  std::shuffle(vnames.begin(), vnames.end(), rng);
  std::shuffle(enames.begin(), enames.end(), rng);
  std::map<std::string, std::string> rename;
  ars2d::LabelledGraph h;
  for (std::size_t k = 0; k < g.vertices.size(); ++k) {
    rename[g.vertices[k].id] = vnames[k];
    h.vertices.push_back({vnames[k], g.vertices[k].sign, g.vertices[k].chi});
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    auto c = g.edges[k].cycle;
    if (!c.empty()) std::rotate(c.begin(), c.begin() + static_cast<long>(rng() % c.size()), c.end());
    h.edges.push_back({enames[k], rename[g.edges[k].alpha], rename[g.edges[k].omega], c});
  }
  std::shuffle(h.vertices.begin(), h.vertices.end(), rng);
  std::shuffle(h.edges.begin(), h.edges.end(), rng);
  return h;
}

// Random smooth expression text over x, y, bounded on [-1, 1]^2 so that
// central differences stay meaningful.
inline std::string random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 12 : 3);
  std::uniform_real_distribution<double> num(-2.0, 2.0);
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return "x";
    case 1: return "y";
    case 2: {
      std::ostringstream os;
      os.precision(3);
      os << num(rng);
      return os.str();
    }
    case 3: return "pi";
    case 4: return "(" + sub() + " + " + sub() + ")";
    case 5: return "(" + sub() + " - " + sub() + ")";
    case 6: return "(" + sub() + ")*(" + sub() + ")";
    case 7: return "sin(" + sub() + ")";
    case 8: return "cos(" + sub() + ")";
    case 9: return "atan(" + sub() + ")";
    case 10: return "exp(sin(" + sub() + "))";
    case 11: return "sqrt(1 + (" + sub() + ")^2)";
    default: return "(" + sub() + ")/(2 + cos(" + sub() + "))^" + (rng() % 2 ? "2" : "1");
  }
}

}  // namespace testing_support
