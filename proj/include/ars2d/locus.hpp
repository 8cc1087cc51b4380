#pragma once

#include <array>
#include <optional>
#include <vector>

#include "ars2d/ars_model.hpp"
#include "ars2d/kernels.hpp"

namespace ars2d {

struct TangencyPoint {
  Vec2 location;         // reduced into the chart's fundamental domain
  int contribution = 0;  // +1 when the angle from Z to the distribution increases
  double certificate = 0.0;  // singular-value ratio of the third-step flag at the point
  double position = 0.0;     // vertex index + fraction along the owning polyline
};

/// One connected component of the singular locus.
///
/// Points are unwrapped: consecutive points differ by less than half a period
/// on a torus. A closed curve does not repeat its first point; the step from
/// the last point back to the first crosses `wrap` periods.
struct SingularCurve {
  int id = 0;
  std::vector<Vec2> points;
  bool closed = false;
  std::array<int, 2> wrap{0, 0};
  double refine_tol = 0.0;
  std::vector<TangencyPoint> tangencies;
  std::optional<int> revolutions;

  std::size_t size() const { return points.size(); }
  /// Successor/predecessor of vertex k in unwrapped coordinates; closed curves only
  /// at the ends.
  Vec2 next(std::size_t k, const SurfaceChart& chart) const;
  Vec2 prev(std::size_t k, const SurfaceChart& chart) const;
};

class SaddleAmbiguity : public Error {
 public:
  using Error::Error;
};

class NotRegular : public Error {
 public:
  using Error::Error;
};

class TangencyNotTransversal : public Error {
 public:
  using Error::Error;
};

class LiftUnstable : public Error {
 public:
  using Error::Error;
};

class NotClosed : public Error {
 public:
  using Error::Error;
};

constexpr int kDefaultResolution = 512;

/// Marching squares over det(X, Y) = 0 followed by Newton refinement of every
/// vertex. Each component is oriented with M+ on its left.
std::vector<SingularCurve> trace_locus(const Structure& s, int resolution = kDefaultResolution,
                                       Exec exec = Exec::Parallel);

/// Locates the points where the distribution is tangent to the curve and
/// assigns their contributions. Returns the curve with `tangencies` filled.
SingularCurve find_tangencies(const Structure& s, SingularCurve w);

/// Degree of the projectivised distribution along a closed curve, measured
/// against the curve's own tangent.
int revolutions(const Structure& s, const SingularCurve& w);

/// trace_locus + find_tangencies + revolutions (closed curves) in one call.
std::vector<SingularCurve> analyze_locus(const Structure& s, int resolution = kDefaultResolution,
                                         Exec exec = Exec::Parallel);

/// Saddle cell (i, j) of `lat` (corners c0..c3 counter-clockwise from (i, j)):
/// true when c0 and c2 are joined through the cell centre. Throws
/// SaddleAmbiguity when quarter-cell sampling cannot decide.
bool saddle_joins_c0(const Structure& s, const Lattice& lat, int i, int j);

/// Newton projection onto det = 0 along the gradient. Throws NotRegular when
/// the gradient degenerates or the iteration does not reach `tol`.
Vec2 refine_onto_locus(const Structure& s, Vec2 p, double tol, double max_step);

}  // namespace ars2d
