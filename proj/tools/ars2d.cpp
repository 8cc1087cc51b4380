// ars2d: command-line front end.
//
// Exit codes: 0 ok / equivalent / (H0) pass, 1 not equivalent,
// 2 invalid input, 3 (H0) fails, 4 unreachable.
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ars2d/distance.hpp"
#include "ars2d/report.hpp"

using namespace ars2d;

namespace {

struct Common {
  std::string input;
  std::string fixture_name;
  int resolution = kDefaultResolution;
  std::string out;
  NormalFormParams params;
};

void add_common(CLI::App* cmd, Common& c, bool input_required = false) {
  auto* in = cmd->add_option("input", c.input, "structure JSON, graph JSON or fixture name");
  if (input_required) in->required();
  cmd->add_option("--fixture", c.fixture_name, "built-in structure name");
  cmd->add_option("--resolution", c.resolution, "lattice cells per side")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "write output here instead of stdout");
  cmd->add_option("--phi", c.params.phi, "normal-form function phi(x, y)");
  cmd->add_option("--psi", c.params.psi, "normal-form function psi(x)");
  cmd->add_option("--xi", c.params.xi, "normal-form function xi(x, y)");
}

Operand operand(const Common& c) {
  if (!c.fixture_name.empty()) {
    if (!c.input.empty()) throw InvalidInput("give either an input or --fixture, not both");
    return load_operand(c.fixture_name, c.params);
  }
  if (c.input.empty()) throw InvalidInput("no input given");
  return load_operand(c.input, c.params);
}

ArsSpec spec_operand(const Common& c) {
  Operand op = operand(c);
  if (!op.spec) throw InvalidInput("this command needs a structure, not a graph");
  return *op.spec;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + c.out);
  f << text;
}

double number(std::string_view s) {
  double v = 0.0;
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) throw InvalidInput("not a number: '" + std::string(s) + "'");
  return v;
}

// "x,y"
Vec2 point(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw InvalidInput("expected a point 'x,y', got '" + s + "'");
  return {number(std::string_view(s).substr(0, comma)), number(std::string_view(s).substr(comma + 1))};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

int run_analyze(const Common& c) {
  const AnalysisReport r = analyze(spec_operand(c), c.resolution);
  emit(c, report_to_text(r));
  if (!r.h0.pass()) {
    for (const auto& f : r.h0.failures) std::cerr << "(H0) " << to_string(f.condition) << ": " << f.message << "\n";
    return 3;
  }
  return 0;
}

int run_compare(const Common& a, const std::string& b_input) {
  Common b = a;
  b.input = b_input;
  b.fixture_name.clear();
  const LabelledGraph g1 = operand_graph(operand(a), a.resolution);
  const LabelledGraph g2 = operand_graph(operand(b), b.resolution);
  const auto w = equivalent(g1, g2);
  if (!w) {
    emit(a, "NOT-EQUIVALENT\n");
    return 1;
  }
  std::ostringstream os;
  os << "EQUIVALENT flipped=" << (w->flipped ? "true" : "false") << "\n";
  for (const auto& [u, v] : w->vertex_map) os << "  vertex " << u << " -> " << v << "\n";
  for (const auto& [e, f] : w->edge_map) os << "  edge " << e << " -> " << f << "\n";
  emit(a, os.str());
  return 0;
}

struct DistanceArgs {
  std::string from, to, method = "grid", covector;
  double duration = 1.0;
  int steps = 2000;
};

int run_distance(const Common& c, const DistanceArgs& d) {
  const Structure s(spec_operand(c));
  validate(s);
  const Vec2 p = point(d.from);
  if (d.method == "grid") {
    emit(c, fmt(cc_distance_grid(s, p, point(d.to), c.resolution)) + "\n");
    return 0;
  }
  if (d.covector.empty()) throw InvalidInput("--method shoot needs --covector px,py");
  const AdmissibleCurve curve = geodesic_shoot(s, p, point(d.covector), d.duration, d.steps);
  const Vec2 end = curve.endpoint();
  std::ostringstream os;
  os << "endpoint " << fmt(end.x) << "," << fmt(end.y) << "\n";
  os << "length " << fmt(curve_length(s, curve)) << "\n";
  if (!d.to.empty()) os << "miss " << fmt(norm(end - point(d.to))) << "\n";
  emit(c, os.str());
  return 0;
}

int run_graph(const Common& c, const std::string& format) {
  const LabelledGraph g = operand_graph(operand(c), c.resolution);
  emit(c, format == "dot" ? graph_to_dot(g) : graph_to_json_text(g));
  return 0;
}

int run_classify(const Common& c, const std::string& at) {
  const Structure s(spec_operand(c));
  const Vec2 p = point(at);
  if (!s.chart().contains(p)) throw InvalidInput("point outside the chart");
  emit(c, std::string(to_string(s.classify(p))) + "\n");
  return 0;
}

struct BallBoxArgs {
  std::string at, direction;
  double hmin = 0.01, hmax = 0.16;
};

int run_ballbox(const Common& c, const BallBoxArgs& b) {
  const Structure s(spec_operand(c));
  validate(s);
  const BallBoxFit fit = ballbox_fit(s, point(b.at), point(b.direction), b.hmin, b.hmax, c.resolution);
  std::ostringstream os;
  os << "exponent " << fmt(fit.exponent) << "\n";
  for (std::size_t k = 0; k < fit.h.size(); ++k) os << "  h " << fmt(fit.h[k]) << "  d " << fmt(fit.d[k]) << "\n";
  emit(c, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Analysis of two-dimensional almost-Riemannian structures"};
  app.require_subcommand(1);

  Common analyze_c, compare_c, distance_c, graph_c, classify_c, ballbox_c;
  std::string compare_b, graph_format = "json", classify_at;
  DistanceArgs dist;
  BallBoxArgs bb;

  auto* analyze_cmd = app.add_subcommand("analyze", "singular locus, tangencies, (H0) and graph as JSON");
  add_common(analyze_cmd, analyze_c);

  auto* compare_cmd = app.add_subcommand("compare", "decide equivalence of two structures or graphs");
  add_common(compare_cmd, compare_c, true);
  compare_cmd->add_option("other", compare_b, "second structure, graph or fixture")->required();

  auto* distance_cmd = app.add_subcommand("distance", "Carnot-Caratheodory distance estimate");
  add_common(distance_cmd, distance_c);
  distance_cmd->add_option("--from", dist.from, "start point x,y")->required();
  distance_cmd->add_option("--to", dist.to, "end point x,y (required for grid)");
  distance_cmd->add_option("--method", dist.method)->check(CLI::IsMember({"grid", "shoot"}));
  distance_cmd->add_option("--covector", dist.covector, "initial covector px,py for shoot");
  distance_cmd->add_option("--duration", dist.duration, "integration time for shoot");
  distance_cmd->add_option("--steps", dist.steps, "RK4 steps for shoot")->check(CLI::PositiveNumber);

  auto* graph_cmd = app.add_subcommand("graph", "labelled graph as JSON or DOT");
  add_common(graph_cmd, graph_c);
  graph_cmd->add_option("--format", graph_format)->check(CLI::IsMember({"json", "dot"}));

  auto* classify_cmd = app.add_subcommand("classify", "classify a point (ordinary, grushin, tangency)");
  add_common(classify_cmd, classify_c);
  classify_cmd->add_option("--at", classify_at, "point x,y")->required();

  auto* ballbox_cmd = app.add_subcommand("ballbox", "log-log fit of distance against offset");
  add_common(ballbox_cmd, ballbox_c);
  ballbox_cmd->add_option("--at", bb.at, "base point x,y")->required();
  ballbox_cmd->add_option("--direction", bb.direction, "offset direction x,y")->required();
  ballbox_cmd->add_option("--hmin", bb.hmin);
  ballbox_cmd->add_option("--hmax", bb.hmax);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze_cmd) return run_analyze(analyze_c);
    if (*compare_cmd) return run_compare(compare_c, compare_b);
    if (*distance_cmd) {
      if (dist.method == "grid" && dist.to.empty()) throw InvalidInput("--method grid needs --to");
      return run_distance(distance_c, dist);
    }
    if (*graph_cmd) return run_graph(graph_c, graph_format);
    if (*classify_cmd) return run_classify(classify_c, classify_at);
    if (*ballbox_cmd) return run_ballbox(ballbox_c, bb);
  } catch (const Unreachable& e) {
    std::cerr << "unreachable: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
