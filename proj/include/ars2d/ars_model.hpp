#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>

#include "ars2d/error.hpp"
#include "ars2d/expr.hpp"

namespace ars2d {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Numeric thresholds used by classification, tracing and metric solves.
///
/// Every threshold is relative to a local magnitude. `from_env` multiplies
/// all of them by ARS2D_TOL_SCALE when that variable is set.
struct Tolerances {
  double det = 1e-8;     // |det| / (local frame magnitude) below this is singular
  double rank = 1e-6;    // singular-value ratio below this drops a rank
  double span = 1e-7;    // relative residual of v against the span of a rank-1 frame
  double refine = 1e-10; // Newton target on det, relative to the grid frame magnitude
  double regular = 1e-6; // |grad det| * chart size / magnitude below this is not regular

  Tolerances scaled(double s) const { return {det * s, rank * s, span * s, refine * s, regular * s}; }
  static Tolerances from_env();
};

enum class ChartKind { Torus, Plane };

struct SurfaceChart {
  ChartKind kind = ChartKind::Plane;
  // Torus: the fundamental domain is [0, Lx) x [0, Ly). Plane: [xmin, xmax] x [ymin, ymax].
  double xmin = -1.0;
  double xmax = 1.0;
  double ymin = -1.0;
  double ymax = 1.0;

  static SurfaceChart torus(double lx, double ly) { return {ChartKind::Torus, 0.0, lx, 0.0, ly}; }
  static SurfaceChart plane(double x0, double x1, double y0, double y1) {
    return {ChartKind::Plane, x0, x1, y0, y1};
  }

  bool is_torus() const { return kind == ChartKind::Torus; }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  double size() const { return std::max(width(), height()); }
  bool contains(Vec2 p) const;
  /// Torus: reduces p into the fundamental domain. Plane: identity.
  Vec2 wrap(Vec2 p) const;
};

struct VectorField {
  Expr e1;
  Expr e2;

  Vec2 eval(Vec2 p) const { return {e1.eval(p.x, p.y), e2.eval(p.x, p.y)}; }
  static VectorField parse(const std::string& c1, const std::string& c2);
};

struct ArsSpec {
  SurfaceChart chart;
  VectorField X;
  VectorField Y;
  int orientation = +1;  // sign of the bundle orientation of (sigma_X, sigma_Y)
  std::string name;      // fixture name or file stem, informational
};

enum class PointClass { Ordinary, Grushin, Tangency };

const char* to_string(PointClass c);

class DegeneratePoint : public Error {
 public:
  DegeneratePoint(Vec2 p, const std::string& what) : Error(what), point_(p) {}
  Vec2 point() const { return point_; }

 private:
  Vec2 point_;
};

/// [V, W] = (DW) V - (DV) W, computed symbolically.
VectorField lie_bracket(const VectorField& v, const VectorField& w);

/// det(X, Y) as an expression; its zero set is the singular locus.
Expr det_frame(const ArsSpec& s);

/// Smallest-to-largest singular value ratio of the 2 x n matrix whose columns
/// are the given vectors; 0 when all vanish.
double rank2_ratio(std::span<const Vec2> cols);

/// Spec plus the symbolic objects every analysis needs: the determinant and
/// its gradient, the first and second brackets, and the frame Jacobians.
class Structure {
 public:
  explicit Structure(ArsSpec spec, Tolerances tol = Tolerances::from_env());

  const ArsSpec& spec() const { return spec_; }
  const SurfaceChart& chart() const { return spec_.chart; }
  const Tolerances& tol() const { return tol_; }
  int orientation() const { return spec_.orientation; }

  const Expr& det() const { return det_; }
  const VectorField& bracket() const { return xy_; }     // [X, Y]
  const VectorField& bracket_x() const { return xxy_; }  // [X, [X, Y]]
  const VectorField& bracket_y() const { return yxy_; }  // [Y, [X, Y]]

  Vec2 X(Vec2 p) const { return spec_.X.eval(p); }
  Vec2 Y(Vec2 p) const { return spec_.Y.eval(p); }
  double det_at(Vec2 p) const { return det_.eval(p.x, p.y); }
  Vec2 det_gradient(Vec2 p) const { return {det_dx_.eval(p.x, p.y), det_dy_.eval(p.x, p.y)}; }

  /// Column-major Jacobians: d X / d x and d X / d y.
  std::array<Vec2, 2> jacobian_X(Vec2 p) const;
  std::array<Vec2, 2> jacobian_Y(Vec2 p) const;

  /// (|X| + |Y|)^2, floored away from zero; the magnitude det is compared to.
  double frame_magnitude(Vec2 p) const;

  bool singular_at(Vec2 p) const;
  /// Singular-value ratio of {X, Y, [X,Y]} and of the full third-step flag.
  double step2_ratio(Vec2 p) const;
  double step3_ratio(Vec2 p) const;

  PointClass classify(Vec2 p) const;

  /// A unit vector spanning the distribution at a point where it has rank one
  /// (or the larger frame vector elsewhere); zero when both fields vanish.
  Vec2 line_direction(Vec2 p) const;

  double metric_cost(Vec2 p, Vec2 v) const;

 private:
  ArsSpec spec_;
  Tolerances tol_;
  Expr det_;
  Expr det_dx_;
  Expr det_dy_;
  VectorField xy_;
  VectorField xxy_;
  VectorField yxy_;
  std::array<Expr, 8> jac_;  // dX1/dx dX2/dx dX1/dy dX2/dy then the same for Y
};

/// Minimal-norm control cost for the frame values (x, y) at a point:
/// min a^2 + b^2 subject to a x + b y = v, or +infinity when v is outside the span.
double metric_cost_from_frame(Vec2 x, Vec2 y, Vec2 v, const Tolerances& tol);

PointClass classify_point(const ArsSpec& s, Vec2 p);
double metric_cost(const ArsSpec& s, Vec2 p, Vec2 v);

/// Throws InvalidInput if a torus spec is not periodic or the flag fails to
/// span the tangent plane at some sample point.
void validate(const Structure& s, int samples = 32);

}  // namespace ars2d
