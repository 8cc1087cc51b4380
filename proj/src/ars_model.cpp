#include "ars2d/ars_model.hpp"

#include <algorithm>
#include <cfloat>
#include <cstdlib>
#include <limits>
#include <string>

namespace ars2d {

Tolerances Tolerances::from_env() {
  Tolerances t;
  if (const char* env = std::getenv("ARS2D_TOL_SCALE")) {
    char* end = nullptr;
    const double s = std::strtod(env, &end);
    if (end != env && std::isfinite(s) && s > 0.0) return t.scaled(s);
  }
  return t;
}

bool SurfaceChart::contains(Vec2 p) const {
  if (is_torus()) return true;
  return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
}

Vec2 SurfaceChart::wrap(Vec2 p) const {
  if (!is_torus()) return p;
  auto reduce = [](double v, double period) {
    double r = std::fmod(v, period);
    if (r < 0.0) r += period;
    if (r >= period) r -= period;
    return r;
  };
  return {reduce(p.x, width()), reduce(p.y, height())};
}

VectorField VectorField::parse(const std::string& c1, const std::string& c2) {
  return {ars2d::parse(c1), ars2d::parse(c2)};
}

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::Ordinary: return "ordinary";
    case PointClass::Grushin: return "grushin";
    case PointClass::Tangency: return "tangency";
  }
  return "?";
}

VectorField lie_bracket(const VectorField& v, const VectorField& w) {
  // Component i: sum_j V_j d_j W_i - W_j d_j V_i.
  auto component = [&](const Expr& wi, const Expr& vi) {
    return v.e1 * differentiate(wi, Var::X) + v.e2 * differentiate(wi, Var::Y) -
           (w.e1 * differentiate(vi, Var::X) + w.e2 * differentiate(vi, Var::Y));
  };
  return {component(w.e1, v.e1), component(w.e2, v.e2)};
}

Expr det_frame(const ArsSpec& s) { return s.X.e1 * s.Y.e2 - s.X.e2 * s.Y.e1; }

double rank2_ratio(std::span<const Vec2> cols) {
  double a = 0.0, b = 0.0, c = 0.0;
  for (const Vec2& v : cols) {
    a += v.x * v.x;
    b += v.x * v.y;
    c += v.y * v.y;
  }
  const double half_trace = 0.5 * (a + c);
  const double disc = std::hypot(0.5 * (a - c), b);
  const double lmax = half_trace + disc;
  if (lmax <= 0.0) return 0.0;
  const double lmin = std::max(0.0, (a * c - b * b) / lmax);
  return std::sqrt(lmin / lmax);
}

double metric_cost_from_frame(Vec2 x, Vec2 y, Vec2 v, const Tolerances& tol) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double mag = std::max((norm(x) + norm(y)) * (norm(x) + norm(y)), DBL_MIN);
  const double d = cross(x, y);
  if (std::fabs(d) > tol.det * mag) {
    const double a = cross(v, y) / d;
    const double b = cross(x, v) / d;
    return a * a + b * b;
  }
  // Rank one (or zero): project onto the principal direction of [x y].
  const double gxx = x.x * x.x + y.x * y.x;
  const double gxy = x.x * x.y + y.x * y.y;
  const double gyy = x.y * x.y + y.y * y.y;
  const double theta = 0.5 * std::atan2(2.0 * gxy, gxx - gyy);
  const Vec2 u{std::cos(theta), std::sin(theta)};
  const double sx = dot(u, x);
  const double sy = dot(u, y);
  const double s2 = sx * sx + sy * sy;
  const double vn = norm(v);
  if (vn == 0.0) return 0.0;
  if (s2 == 0.0) return inf;
  if (std::fabs(cross(u, v)) > tol.span * vn) return inf;
  const double along = dot(u, v);
  return along * along / s2;
}

Structure::Structure(ArsSpec spec, Tolerances tol) : spec_(std::move(spec)), tol_(tol) {
  det_ = det_frame(spec_);
  det_dx_ = differentiate(det_, Var::X);
  det_dy_ = differentiate(det_, Var::Y);
  xy_ = lie_bracket(spec_.X, spec_.Y);
  xxy_ = lie_bracket(spec_.X, xy_);
  yxy_ = lie_bracket(spec_.Y, xy_);
  jac_ = {differentiate(spec_.X.e1, Var::X), differentiate(spec_.X.e2, Var::X),
          differentiate(spec_.X.e1, Var::Y), differentiate(spec_.X.e2, Var::Y),
          differentiate(spec_.Y.e1, Var::X), differentiate(spec_.Y.e2, Var::X),
          differentiate(spec_.Y.e1, Var::Y), differentiate(spec_.Y.e2, Var::Y)};
}

std::array<Vec2, 2> Structure::jacobian_X(Vec2 p) const {
  return {Vec2{jac_[0].eval(p.x, p.y), jac_[1].eval(p.x, p.y)},
          Vec2{jac_[2].eval(p.x, p.y), jac_[3].eval(p.x, p.y)}};
}

std::array<Vec2, 2> Structure::jacobian_Y(Vec2 p) const {
  return {Vec2{jac_[4].eval(p.x, p.y), jac_[5].eval(p.x, p.y)},
          Vec2{jac_[6].eval(p.x, p.y), jac_[7].eval(p.x, p.y)}};
}

double Structure::frame_magnitude(Vec2 p) const {
  const double m = norm(X(p)) + norm(Y(p));
  return std::max(m * m, DBL_MIN);
}

bool Structure::singular_at(Vec2 p) const {
  return std::fabs(det_at(p)) <= tol_.det * frame_magnitude(p);
}

double Structure::step2_ratio(Vec2 p) const {
  const std::array<Vec2, 3> cols{X(p), Y(p), xy_.eval(p)};
  return rank2_ratio(cols);
}

double Structure::step3_ratio(Vec2 p) const {
  const std::array<Vec2, 5> cols{X(p), Y(p), xy_.eval(p), xxy_.eval(p), yxy_.eval(p)};
  return rank2_ratio(cols);
}

PointClass Structure::classify(Vec2 p) const {
  if (!singular_at(p)) return PointClass::Ordinary;
  if (step2_ratio(p) >= tol_.rank) return PointClass::Grushin;
  if (step3_ratio(p) >= tol_.rank) return PointClass::Tangency;
  throw DegeneratePoint(p, "the bracket flag does not span the tangent plane at (" +
                               std::to_string(p.x) + ", " + std::to_string(p.y) + ")");
}

Vec2 Structure::line_direction(Vec2 p) const {
  const Vec2 x = X(p);
  const Vec2 y = Y(p);
  const double gxx = x.x * x.x + y.x * y.x;
  const double gxy = x.x * x.y + y.x * y.y;
  const double gyy = x.y * x.y + y.y * y.y;
  if (gxx + gyy == 0.0) return {};
  const double theta = 0.5 * std::atan2(2.0 * gxy, gxx - gyy);
  return {std::cos(theta), std::sin(theta)};
}

double Structure::metric_cost(Vec2 p, Vec2 v) const {
  return metric_cost_from_frame(X(p), Y(p), v, tol_);
}

PointClass classify_point(const ArsSpec& s, Vec2 p) { return Structure(s).classify(p); }

double metric_cost(const ArsSpec& s, Vec2 p, Vec2 v) {
  return metric_cost_from_frame(s.X.eval(p), s.Y.eval(p), v, Tolerances::from_env());
}

void validate(const Structure& s, int samples) {
  const SurfaceChart& c = s.chart();
  if (c.width() <= 0.0 || c.height() <= 0.0) throw InvalidInput("chart has an empty domain");
  if (s.orientation() != 1 && s.orientation() != -1) {
    throw InvalidInput("bundle orientation must be +1 or -1");
  }
  const ArsSpec& spec = s.spec();
  const std::array<const Expr*, 4> comps{&spec.X.e1, &spec.X.e2, &spec.Y.e1, &spec.Y.e2};
  if (c.is_torus()) {
    for (int i = 0; i < samples; ++i) {
      const double tx = c.xmin + c.width() * i / samples;
      const double ty = c.ymin + c.height() * i / samples;
      for (const Expr* e : comps) {
        const double a = e->eval(c.xmin, ty), b = e->eval(c.xmax, ty);
        const double u = e->eval(tx, c.ymin), v = e->eval(tx, c.ymax);
        if (std::fabs(a - b) > 1e-9 * (1.0 + std::fabs(a)) ||
            std::fabs(u - v) > 1e-9 * (1.0 + std::fabs(u))) {
          throw InvalidInput("frame component '" + e->to_string() +
                             "' is not periodic with the torus periods");
        }
      }
    }
  }
  for (int i = 0; i <= samples; ++i) {
    for (int j = 0; j <= samples; ++j) {
      const Vec2 p{c.xmin + c.width() * i / samples, c.ymin + c.height() * j / samples};
      if (s.step3_ratio(p) < s.tol().rank) {
        throw InvalidInput("structure is not bracket generating at (" + std::to_string(p.x) + ", " +
                           std::to_string(p.y) + ")");
      }
    }
  }
}

}  // namespace ars2d
