#include "ars2d/h0.hpp"

#include <algorithm>
#include <optional>

namespace ars2d {

const char* to_string(H0Condition c) {
  switch (c) {
    case H0Condition::Embedded: return "i";
    case H0Condition::IsolatedTangent: return "ii";
    case H0Condition::FullFlag: return "iii";
  }
  return "?";
}

namespace {

bool regular_gradient(const Structure& s, Vec2 p) {
  return norm(s.det_gradient(p)) * s.chart().size() > s.tol().regular * s.frame_magnitude(p);
}

// Shortest displacement between two chart points (minimum image on a torus).
double chart_distance(const SurfaceChart& c, Vec2 a, Vec2 b) {
  Vec2 d = a - b;
  if (c.is_torus()) {
    d.x -= std::round(d.x / c.width()) * c.width();
    d.y -= std::round(d.y / c.height()) * c.height();
  }
  return norm(d);
}

// Pushes every lattice node close to det = 0 onto the zero set and returns the
// first limit point where the gradient degenerates.
std::optional<Vec2> singular_zero(const Structure& s, const Lattice& lat) {
  const double h = std::max(lat.hx, lat.hy);
  const std::vector<double> values = sample_scalar(s.det(), lat, Exec::Parallel);
  for (int j = 0; j < lat.ny; ++j) {
    for (int i = 0; i < lat.nx; ++i) {
      const Vec2 p0 = lat.point(i, j);
      if (std::fabs(values[lat.index(i, j)]) > 2.0 * h * norm(s.det_gradient(p0))) continue;
      Vec2 p = p0;
      for (int it = 0; it < 60; ++it) {
        const double f = s.det_at(p);
        if (f == 0.0) break;
        const Vec2 g = s.det_gradient(p);
        const double g2 = dot(g, g);
        if (g2 == 0.0) break;
        Vec2 step = g * (f / g2);
        if (norm(step) > h) step = step * (h / norm(step));
        p = p - step;
        if (norm(p - p0) > 4.0 * h) break;
      }
      const bool on_zero = std::fabs(s.det_at(p)) <= s.tol().det * s.frame_magnitude(p);
      if (on_zero && !regular_gradient(s, p)) return p;
    }
  }
  return std::nullopt;
}

}  // namespace

H0Report check_H0(const Structure& s, const std::vector<SingularCurve>& curves, int resolution) {
  H0Report report;
  const SurfaceChart& chart = s.chart();

  for (const SingularCurve& c : curves) {
    for (const Vec2& p : c.points) {
      if (!regular_gradient(s, p)) {
        report.failures.push_back({H0Condition::Embedded, chart.wrap(p),
                                   "gradient of det(X, Y) vanishes on the singular locus"});
        break;
      }
    }
  }

  // Zeros of det that the sign-change tracer cannot see.
  const Lattice lat = Lattice::over(chart, resolution);
  const double h = std::max(lat.hx, lat.hy);
  if (auto z = singular_zero(s, lat)) {
    report.failures.push_back({H0Condition::Embedded, chart.wrap(*z), "0 is not a regular value of det(X, Y)"});
  }

  std::vector<Vec2> tangencies;
  for (const SingularCurve& c : curves) {
    for (const TangencyPoint& t : c.tangencies) tangencies.push_back(t.location);
  }
  for (std::size_t a = 0; a < tangencies.size(); ++a) {
    for (std::size_t b = a + 1; b < tangencies.size(); ++b) {
      if (chart_distance(chart, tangencies[a], tangencies[b]) <= h) {
        report.failures.push_back({H0Condition::IsolatedTangent, tangencies[a],
                                   "tangency points closer than one grid step"});
      }
    }
  }
  for (const Vec2& t : tangencies) {
    if (s.step3_ratio(t) < s.tol().rank) {
      report.failures.push_back({H0Condition::FullFlag, t, "third-step flag is rank deficient"});
    }
  }
  return report;
}

}  // namespace ars2d
