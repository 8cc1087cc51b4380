#include "ars2d/fixtures.hpp"

#include <algorithm>

namespace ars2d {

using nlohmann::json;

namespace {

ArsSpec make(const std::string& name, SurfaceChart chart, const std::string& x1, const std::string& x2,
             const std::string& y1, const std::string& y2) {
  ArsSpec s;
  s.name = name;
  s.chart = chart;
  s.X = VectorField::parse(x1, x2);
  s.Y = VectorField::parse(y1, y2);
  return s;
}

// "(f)*exp(g)" without the exponential when g is literally 0.
std::string times_exp(const std::string& f, const std::string& g) {
  if (g == "0") return f;
  return "(" + f + ")*exp(" + g + ")";
}

const SurfaceChart kSquare = SurfaceChart::plane(-1.0, 1.0, -1.0, 1.0);
const SurfaceChart kUnitTorus = SurfaceChart::torus(1.0, 1.0);

}  // namespace

std::vector<std::string> fixture_names() {
  return {"F1", "F2", "F3", "grushin-plane", "grushin-torus", "riemannian-torus", "tangency-torus"};
}

bool is_fixture(const std::string& name) {
  const auto names = fixture_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ArsSpec fixture(const std::string& name, const NormalFormParams& p) {
  if (name == "grushin-plane") return make(name, kSquare, "1", "0", "0", "x");
  if (name == "F1") return make(name, kSquare, "1", "0", "0", p.phi == "0" ? "1" : "exp(" + p.phi + ")");
  if (name == "F2") return make(name, kSquare, "1", "0", "0", times_exp("x", p.phi));
  if (name == "F3") {
    const std::string parabola = p.psi == "1" ? "y - x^2" : "y - x^2*(" + p.psi + ")";
    return make(name, kSquare, "1", "0", "0", times_exp(parabola, p.xi));
  }
  if (name == "grushin-torus") return make(name, kUnitTorus, "1", "0", "0", "sin(2*pi*x)");
  if (name == "tangency-torus") {
    return make(name, kUnitTorus, "1", "0", "0", "sin(2*pi*y) - 0.5*cos(2*pi*x)");
  }
  if (name == "riemannian-torus") return make(name, kUnitTorus, "1", "0", "0", "1");
  throw InvalidInput("unknown fixture '" + name + "'");
}

ArsSpec spec_from_json(const json& j) {
  ArsSpec s;
  try {
    const json& surf = j.at("surface");
    const std::string type = surf.at("type").get<std::string>();
    if (type == "torus") {
      const auto periods = surf.at("periods").get<std::vector<double>>();
      if (periods.size() != 2 || !(periods[0] > 0.0) || !(periods[1] > 0.0)) {
        throw InvalidInput("torus periods must be two positive numbers");
      }
      s.chart = SurfaceChart::torus(periods[0], periods[1]);
    } else if (type == "plane") {
      const auto dom = surf.at("domain").get<std::vector<std::vector<double>>>();
      if (dom.size() != 2 || dom[0].size() != 2 || dom[1].size() != 2 || !(dom[0][0] < dom[0][1]) ||
          !(dom[1][0] < dom[1][1])) {
        throw InvalidInput("plane domain must be [[xmin, xmax], [ymin, ymax]] with min < max");
      }
      s.chart = SurfaceChart::plane(dom[0][0], dom[0][1], dom[1][0], dom[1][1]);
    } else {
      throw InvalidInput("surface type must be 'torus' or 'plane'");
    }
    const json& frame = j.at("frame");
    const auto x = frame.at("X").get<std::vector<std::string>>();
    const auto y = frame.at("Y").get<std::vector<std::string>>();
    if (x.size() != 2 || y.size() != 2) throw InvalidInput("frame fields need two components each");
    s.X = VectorField::parse(x[0], x[1]);
    s.Y = VectorField::parse(y[0], y[1]);
    const std::string o = j.value("bundle_orientation", std::string("+"));
    if (o != "+" && o != "-") throw InvalidInput("bundle_orientation must be \"+\" or \"-\"");
    s.orientation = o == "+" ? 1 : -1;
  } catch (const json::exception& ex) {
    throw InvalidInput(std::string("malformed structure JSON: ") + ex.what());
  }
  return s;
}

json spec_to_json(const ArsSpec& s) {
  json surface;
  if (s.chart.is_torus()) {
    surface = {{"type", "torus"}, {"periods", {s.chart.width(), s.chart.height()}}};
  } else {
    surface = {{"type", "plane"},
               {"domain", {{s.chart.xmin, s.chart.xmax}, {s.chart.ymin, s.chart.ymax}}}};
  }
  return {{"surface", surface},
          {"frame",
           {{"X", {s.X.e1.to_string(), s.X.e2.to_string()}}, {"Y", {s.Y.e1.to_string(), s.Y.e2.to_string()}}}},
          {"bundle_orientation", s.orientation > 0 ? "+" : "-"}};
}

}  // namespace ars2d
