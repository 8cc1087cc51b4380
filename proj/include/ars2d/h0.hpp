#pragma once

#include <string>
#include <vector>

#include "ars2d/locus.hpp"

namespace ars2d {

enum class H0Condition {
  Embedded,        // (i) zero is a regular value of det(X, Y)
  IsolatedTangent, // (ii) tangency points are isolated
  FullFlag,        // (iii) the third-step flag spans at every point
};

const char* to_string(H0Condition c);

struct H0Failure {
  H0Condition condition;
  Vec2 point;
  std::string message;
};

struct H0Report {
  std::vector<H0Failure> failures;
  bool pass() const { return failures.empty(); }
};

/// Checks the standing hypotheses on traced curves (tangencies populated).
/// Besides the curve vertices, every lattice node near det = 0 is pushed onto
/// the zero set by Newton's method, which catches zeros where det does not
/// change sign.
H0Report check_H0(const Structure& s, const std::vector<SingularCurve>& curves,
                  int resolution = kDefaultResolution);

}  // namespace ars2d
