#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ars2d/fixtures.hpp"
#include "ars2d/graph.hpp"
#include "ars2d/h0.hpp"
#include "ars2d/locus.hpp"

namespace ars2d {

/// Everything `ars2d analyze` reports about one structure.
struct AnalysisReport {
  std::string digest;  // FNV-1a of the canonical structure JSON
  std::string name;
  int resolution = kDefaultResolution;
  H0Report h0;
  std::vector<SingularCurve> curves;
  std::optional<LabelledGraph> graph;  // torus charts satisfying (H0) only
  int tau_total = 0;                   // sum of all tangency contributions
  std::optional<int> euler_number;
  std::optional<int> total_chi;
};

std::string spec_digest(const ArsSpec& s);

/// Locus, tangencies, revolutions, (H0) and graph. Hypothesis violations
/// detected while tracing end up in `h0` rather than escaping as exceptions.
AnalysisReport analyze(const ArsSpec& s, int resolution = kDefaultResolution);

nlohmann::json report_to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const nlohmann::json& j);
std::string report_to_text(const AnalysisReport& r);

/// A command-line operand: a structure JSON file, a graph JSON file, or the
/// name of a built-in fixture.
struct Operand {
  std::optional<ArsSpec> spec;
  std::optional<LabelledGraph> graph;
};

Operand load_operand(const std::string& arg, const NormalFormParams& params = {});

/// The operand's labelled graph, building it from the structure when needed.
LabelledGraph operand_graph(const Operand& op, int resolution = kDefaultResolution);

}  // namespace ars2d
