#include "ars2d/report.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ars2d {

using nlohmann::json;

std::string spec_digest(const ArsSpec& s) {
  const std::string text = spec_to_json(s).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << h;
  return os.str();
}

AnalysisReport analyze(const ArsSpec& spec, int resolution) {
  AnalysisReport r;
  r.digest = spec_digest(spec);
  r.name = spec.name;
  r.resolution = resolution;
  const Structure s(spec);
  validate(s);

  try {
    r.curves = analyze_locus(s, resolution);
  } catch (const NotRegular& e) {
    r.h0.failures.push_back({H0Condition::Embedded, {}, e.what()});
  } catch (const SaddleAmbiguity& e) {
    r.h0.failures.push_back({H0Condition::Embedded, {}, e.what()});
  } catch (const TangencyNotTransversal& e) {
    r.h0.failures.push_back({H0Condition::IsolatedTangent, {}, e.what()});
  } catch (const DegeneratePoint& e) {
    r.h0.failures.push_back({H0Condition::FullFlag, e.point(), e.what()});
  }
  const H0Report checked = check_H0(s, r.curves, resolution);
  r.h0.failures.insert(r.h0.failures.end(), checked.failures.begin(), checked.failures.end());

  for (const auto& c : r.curves) {
    for (const auto& t : c.tangencies) r.tau_total += t.contribution;
  }
  if (s.chart().is_torus() && r.h0.pass()) {
    try {
      r.graph = build_graph(s, r.curves, resolution);
      r.euler_number = euler_number(*r.graph);
      r.total_chi = total_chi(*r.graph);
    } catch (const AdjacencyAmbiguous& e) {
      r.h0.failures.push_back({H0Condition::Embedded, {}, e.what()});
    }
  }
  return r;
}

namespace {

json point_json(Vec2 p) { return json::array({p.x, p.y}); }
Vec2 point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

H0Condition condition_from(const std::string& s) {
  if (s == "i") return H0Condition::Embedded;
  if (s == "ii") return H0Condition::IsolatedTangent;
  if (s == "iii") return H0Condition::FullFlag;
  throw InvalidInput("unknown (H0) condition '" + s + "'");
}

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

json report_to_json(const AnalysisReport& r) {
  json failures = json::array();
  for (const auto& f : r.h0.failures) {
    failures.push_back({{"condition", to_string(f.condition)}, {"point", point_json(f.point)}, {"message", f.message}});
  }
  json curves = json::array();
  for (const auto& c : r.curves) {
    json pts = json::array();
    for (const auto& p : c.points) pts.push_back(point_json(p));
    json tans = json::array();
    for (const auto& t : c.tangencies) {
      tans.push_back({{"location", point_json(t.location)},
                      {"contribution", t.contribution},
                      {"certificate", t.certificate},
                      {"position", t.position}});
    }
    curves.push_back({{"id", c.id},
                      {"closed", c.closed},
                      {"wrap", c.wrap},
                      {"refine_tol", c.refine_tol},
                      {"points", pts},
                      {"tangencies", tans},
                      {"revolutions", optional_json(c.revolutions)}});
  }
  return {{"digest", r.digest},
          {"name", r.name},
          {"resolution", r.resolution},
          {"h0", {{"pass", r.h0.pass()}, {"failures", failures}}},
          {"curves", curves},
          {"graph", r.graph ? graph_to_json(*r.graph) : json(nullptr)},
          {"tau_total", r.tau_total},
          {"euler_number", optional_json(r.euler_number)},
          {"total_chi", optional_json(r.total_chi)}};
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  try {
    r.digest = j.at("digest").get<std::string>();
    r.name = j.at("name").get<std::string>();
    r.resolution = j.at("resolution").get<int>();
    for (const auto& f : j.at("h0").at("failures")) {
      r.h0.failures.push_back({condition_from(f.at("condition").get<std::string>()), point_from(f.at("point")),
                               f.at("message").get<std::string>()});
    }
    for (const auto& cj : j.at("curves")) {
      SingularCurve c;
      c.id = cj.at("id").get<int>();
      c.closed = cj.at("closed").get<bool>();
      c.wrap = cj.at("wrap").get<std::array<int, 2>>();
      c.refine_tol = cj.at("refine_tol").get<double>();
      for (const auto& p : cj.at("points")) c.points.push_back(point_from(p));
      for (const auto& tj : cj.at("tangencies")) {
        c.tangencies.push_back({point_from(tj.at("location")), tj.at("contribution").get<int>(),
                                tj.at("certificate").get<double>(), tj.at("position").get<double>()});
      }
      if (!cj.at("revolutions").is_null()) c.revolutions = cj.at("revolutions").get<int>();
      r.curves.push_back(std::move(c));
    }
    if (!j.at("graph").is_null()) r.graph = graph_from_json(j.at("graph"));
    r.tau_total = j.at("tau_total").get<int>();
    if (!j.at("euler_number").is_null()) r.euler_number = j.at("euler_number").get<int>();
    if (!j.at("total_chi").is_null()) r.total_chi = j.at("total_chi").get<int>();
  } catch (const json::exception& ex) {
    throw InvalidInput(std::string("malformed report JSON: ") + ex.what());
  }
  return r;
}

std::string report_to_text(const AnalysisReport& r) { return report_to_json(r).dump(2) + "\n"; }

Operand load_operand(const std::string& arg, const NormalFormParams& params) {
  Operand op;
  if (std::filesystem::is_regular_file(arg)) {
    std::ifstream in(arg);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& ex) {
      throw InvalidInput(arg + ": " + ex.what());
    }
    if (j.is_object() && j.contains("vertices")) {
      op.graph = graph_from_json(j);
    } else {
      op.spec = spec_from_json(j);
      op.spec->name = std::filesystem::path(arg).stem().string();
    }
    return op;
  }
  if (is_fixture(arg)) {
    op.spec = fixture(arg, params);
    return op;
  }
  throw InvalidInput("'" + arg + "' is neither a readable file nor a built-in fixture");
}

LabelledGraph operand_graph(const Operand& op, int resolution) {
  if (op.graph) return *op.graph;
  const Structure s(*op.spec);
  validate(s);
  const auto curves = analyze_locus(s, resolution);
  return build_graph(s, curves, resolution);
}

}  // namespace ars2d
