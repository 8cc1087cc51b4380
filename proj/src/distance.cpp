#include "ars2d/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

namespace ars2d {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::size_t GridSolution::snap(Vec2 q) const {
  int i = static_cast<int>(std::lround((q.x - lattice.origin.x) / lattice.hx));
  int j = static_cast<int>(std::lround((q.y - lattice.origin.y) / lattice.hy));
  if (lattice.periodic) {
    lattice.normalize(i, j);
  } else {
    i = std::clamp(i, 0, lattice.nx - 1);
    j = std::clamp(j, 0, lattice.ny - 1);
  }
  return lattice.index(i, j);
}

Vec2 GridSolution::node(std::size_t k) const {
  const int i = static_cast<int>(k % static_cast<std::size_t>(lattice.nx));
  const int j = static_cast<int>(k / static_cast<std::size_t>(lattice.nx));
  return lattice.point(i, j);
}

GridSolution solve_grid(const Structure& s, Vec2 source, int resolution, Exec exec) {
  if (resolution < 2) throw InvalidInput("resolution must be at least 2");
  GridSolution sol;
  sol.resolution = resolution;
  sol.source = source;
  sol.lattice = Lattice::over(s.chart(), resolution);
  const Lattice& lat = sol.lattice;

  const auto steps = stencil16();
  const FrameSamples half = sample_frame(s, lat.refined(), exec);
  const std::vector<double> cost = stencil_costs(lat, half, steps, s.tol(), exec);

  sol.dist.assign(lat.size(), kInf);
  sol.pred.assign(lat.size(), -1);
  const std::size_t src = sol.snap(source);
  sol.dist[src] = 0.0;

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  queue.emplace(0.0, src);
  const std::size_t k = steps.size();
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > sol.dist[u]) continue;
    const int i = static_cast<int>(u % static_cast<std::size_t>(lat.nx));
    const int j = static_cast<int>(u / static_cast<std::size_t>(lat.nx));
    for (std::size_t e = 0; e < k; ++e) {
      const double c = cost[u * k + e];
      if (!std::isfinite(c)) continue;
      int ti = i + steps[e].di;
      int tj = j + steps[e].dj;
      if (!lat.normalize(ti, tj)) continue;
      const std::size_t v = lat.index(ti, tj);
      const double nd = d + c;
      if (nd < sol.dist[v]) {
        sol.dist[v] = nd;
        sol.pred[v] = static_cast<long>(u);
        queue.emplace(nd, v);
      }
    }
  }
  return sol;
}

double cc_distance_grid(const Structure& s, Vec2 p, Vec2 q, int resolution) {
  if (!s.chart().contains(p) || !s.chart().contains(q)) throw InvalidInput("point outside the chart");
  const GridSolution sol = solve_grid(s, p, resolution);
  const double d = sol.at(q);
  if (!std::isfinite(d)) {
    throw Unreachable("no finite-cost lattice path at resolution " + std::to_string(resolution), resolution);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Normal extremals

double hamiltonian(const Structure& s, Vec2 q, Vec2 p) {
  const double a = dot(p, s.X(q));
  const double b = dot(p, s.Y(q));
  return 0.5 * (a * a + b * b);
}

namespace {

struct State {
  Vec2 q;
  Vec2 p;
  State operator+(const State& o) const { return {q + o.q, p + o.p}; }
  State operator*(double h) const { return {q * h, p * h}; }
};

State flow(const Structure& s, const State& z) {
  const Vec2 x = s.X(z.q);
  const Vec2 y = s.Y(z.q);
  const double a = dot(z.p, x);
  const double b = dot(z.p, y);
  const auto jx = s.jacobian_X(z.q);
  const auto jy = s.jacobian_Y(z.q);
  const Vec2 dq = x * a + y * b;
  const Vec2 dp{-(a * dot(z.p, jx[0]) + b * dot(z.p, jy[0])), -(a * dot(z.p, jx[1]) + b * dot(z.p, jy[1]))};
  return {dq, dp};
}

Vec2 controls(const Structure& s, Vec2 q, Vec2 p) { return {dot(p, s.X(q)), dot(p, s.Y(q))}; }

}  // namespace

AdmissibleCurve geodesic_shoot(const Structure& s, Vec2 start, Vec2 covector, double duration, int steps) {
  if (steps < 1 || !(duration > 0.0)) throw InvalidInput("shooting needs a positive duration and step count");
  const double h0 = hamiltonian(s, start, covector);
  if (!(h0 > 0.0)) throw InvalidInput("initial covector annihilates the distribution (H = 0)");
  AdmissibleCurve c;
  c.t.reserve(steps + 1);
  State z{start, covector};
  const double dt = duration / steps;
  auto record = [&](double t) {
    c.t.push_back(t);
    c.q.push_back(z.q);
    c.covector.push_back(z.p);
    c.control.push_back(controls(s, z.q, z.p));
  };
  record(0.0);
  for (int n = 0; n < steps; ++n) {
    const State k1 = flow(s, z);
    const State k2 = flow(s, z + k1 * (dt / 2));
    const State k3 = flow(s, z + k2 * (dt / 2));
    const State k4 = flow(s, z + k3 * dt);
    z = z + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6);
    record((n + 1) * dt);
    const double drift = std::fabs(hamiltonian(s, z.q, z.p) - h0) / h0;
    if (drift > 1e-6) {
      throw StepUnstable("Hamiltonian drifted by " + std::to_string(drift) + " (relative) at t = " +
                         std::to_string(c.t.back()));
    }
  }
  return c;
}

AdmissibleCurve admissible_from_samples(const Structure& s, std::vector<double> t, std::vector<Vec2> q) {
  if (t.size() != q.size() || t.size() < 2) throw InvalidInput("need at least two matching samples");
  AdmissibleCurve c;
  const std::size_t n = t.size();
  c.control.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t a = k == 0 ? 0 : k - 1;
    const std::size_t b = k + 1 == n ? k : k + 1;
    const Vec2 v = (q[b] - q[a]) * (1.0 / (t[b] - t[a]));
    const Vec2 x = s.X(q[k]);
    const Vec2 y = s.Y(q[k]);
    const double det = cross(x, y);
    if (std::fabs(det) > s.tol().det * s.frame_magnitude(q[k])) {
      c.control[k] = {cross(v, y) / det, cross(x, v) / det};
    } else {
      // Minimal-norm least squares along the rank-one line.
      const double nx2 = dot(x, x) + dot(y, y);
      if (nx2 == 0.0) throw InadmissibleSample("frame vanishes at a sample");
      const Vec2 u = s.line_direction(q[k]);
      const double along = dot(u, v);
      if (std::fabs(cross(u, v)) > s.tol().span * norm(v)) {
        throw InadmissibleSample("sample " + std::to_string(k) + " moves outside the distribution");
      }
      const double sx = dot(u, x), sy = dot(u, y);
      const double s2 = sx * sx + sy * sy;
      c.control[k] = {along * sx / s2, along * sy / s2};
    }
  }
  c.t = std::move(t);
  c.q = std::move(q);
  return c;
}

double reconstruction_defect(const Structure& s, const AdmissibleCurve& c) {
  double worst = 0.0;
  auto velocity = [&](std::size_t k) { return s.X(c.q[k]) * c.control[k].x + s.Y(c.q[k]) * c.control[k].y; };
  for (std::size_t k = 0; k + 1 < c.q.size(); ++k) {
    const double dt = c.t[k + 1] - c.t[k];
    const Vec2 predicted = (velocity(k) + velocity(k + 1)) * (0.5 * dt);
    worst = std::max(worst, norm((c.q[k + 1] - c.q[k]) - predicted));
  }
  return worst;
}

double curve_length(const Structure& s, const AdmissibleCurve& c) {
  std::vector<double> speed(c.q.size());
  for (std::size_t k = 0; k < c.q.size(); ++k) {
    const Vec2 v = s.X(c.q[k]) * c.control[k].x + s.Y(c.q[k]) * c.control[k].y;
    const double g = s.metric_cost(c.q[k], v);
    if (!std::isfinite(g)) {
      throw InadmissibleSample("sample " + std::to_string(k) + " has a velocity outside the distribution");
    }
    speed[k] = std::sqrt(g);
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < c.q.size(); ++k) total += 0.5 * (speed[k] + speed[k + 1]) * (c.t[k + 1] - c.t[k]);
  return total;
}

// ---------------------------------------------------------------------------
// Ball-Box scaling

BallBoxFit ballbox_fit(const Structure& s, Vec2 p, Vec2 direction, double h_min, double h_max, int resolution) {
  if (!(h_min > 0.0) || !(h_max >= 16.0 * h_min) || h_max >= s.chart().size()) {
    throw InvalidInput("offsets must satisfy 0 < h_min, 16 h_min <= h_max < chart size");
  }
  const double dn = norm(direction);
  if (dn == 0.0) throw InvalidInput("direction must be nonzero");
  direction = direction * (1.0 / dn);

  const GridSolution sol = solve_grid(s, p, resolution);
  const Vec2 origin = sol.node(sol.snap(p));
  constexpr int kSamples = 8;
  BallBoxFit fit;
  for (int n = 0; n < kSamples; ++n) {
    const double h = h_min * std::pow(h_max / h_min, static_cast<double>(n) / (kSamples - 1));
    const std::size_t node = sol.snap(p + direction * h);
    const double d = sol.dist[node];
    if (!std::isfinite(d) || d <= 0.0) {
      throw Unreachable("offset " + std::to_string(h) + " is unreachable on the lattice", resolution);
    }
    fit.h.push_back(dot(sol.node(node) - origin, direction));
    fit.d.push_back(d);
  }
  double mx = 0.0, my = 0.0;
  for (int n = 0; n < kSamples; ++n) {
    mx += std::log(fit.h[n]);
    my += std::log(fit.d[n]);
  }
  mx /= kSamples;
  my /= kSamples;
  double sxy = 0.0, sxx = 0.0;
  for (int n = 0; n < kSamples; ++n) {
    const double dx = std::log(fit.h[n]) - mx;
    sxy += dx * (std::log(fit.d[n]) - my);
    sxx += dx * dx;
  }
  fit.exponent = sxy / sxx;
  return fit;
}

double ballbox_exponent(const Structure& s, Vec2 p, Vec2 direction, double h_min, double h_max, int resolution) {
  return ballbox_fit(s, p, direction, h_min, h_max, resolution).exponent;
}

}  // namespace ars2d
