#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ars2d/ars_model.hpp"

namespace ars2d {

/// Free functions of the local normal forms, as expression text.
struct NormalFormParams {
  std::string phi = "0";
  std::string psi = "1";
  std::string xi = "0";
};

/// Built-in structures:
///   grushin-plane    X = (1, 0), Y = (0, x) on [-1, 1]^2
///   F1, F2, F3       local normal forms on [-1, 1]^2
///   grushin-torus    X = (1, 0), Y = (0, sin(2 pi x)) on the unit torus
///   tangency-torus   X = (1, 0), Y = (0, sin(2 pi y) - 0.5 cos(2 pi x)) on the unit torus
///   riemannian-torus X = (1, 0), Y = (0, 1) on the unit torus
ArsSpec fixture(const std::string& name, const NormalFormParams& params = {});
bool is_fixture(const std::string& name);
std::vector<std::string> fixture_names();

/// {"surface": {...}, "frame": {"X": [e1, e2], "Y": [e1, e2]}, "bundle_orientation": "+"|"-"}
ArsSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ArsSpec& s);

}  // namespace ars2d
