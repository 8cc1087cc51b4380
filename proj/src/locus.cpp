#include "ars2d/locus.hpp"

#include <algorithm>
#include <cfloat>
#include <exception>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>

namespace ars2d {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt_point(Vec2 p) { return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; }

Vec2 period_of(const SurfaceChart& c) { return {c.width(), c.height()}; }

// Reduces an angle into (-pi/2, pi/2]; lines are identified modulo pi.
double reduce_line_angle(double a) {
  a = std::fmod(a, kPi);
  if (a > kPi / 2) a -= kPi;
  if (a <= -kPi / 2) a += kPi;
  return a;
}

}  // namespace

Vec2 SingularCurve::next(std::size_t k, const SurfaceChart& chart) const {
  if (k + 1 < points.size()) return points[k + 1];
  const Vec2 L = period_of(chart);
  return points.front() + Vec2{wrap[0] * L.x, wrap[1] * L.y};
}

Vec2 SingularCurve::prev(std::size_t k, const SurfaceChart& chart) const {
  if (k > 0) return points[k - 1];
  const Vec2 L = period_of(chart);
  return points.back() - Vec2{wrap[0] * L.x, wrap[1] * L.y};
}

Vec2 refine_onto_locus(const Structure& s, Vec2 p, double tol, double max_step) {
  const double size = s.chart().size();
  for (int it = 0; it <= 20; ++it) {
    const double f = s.det_at(p);
    if (std::fabs(f) <= tol) return p;
    if (it == 20) break;
    const Vec2 g = s.det_gradient(p);
    const double g2 = dot(g, g);
    if (std::sqrt(g2) * size <= s.tol().regular * s.frame_magnitude(p)) {
      throw NotRegular("gradient of det(X, Y) vanishes near " + fmt_point(p));
    }
    Vec2 step = g * (f / g2);
    const double len = norm(step);
    if (len > max_step) step = step * (max_step / len);
    p = p - step;
  }
  throw NotRegular("Newton refinement onto det(X, Y) = 0 stalled near " + fmt_point(p));
}

bool saddle_joins_c0(const Structure& s, const Lattice& lat, int i, int j) {
  const Vec2 c = lat.point(i, j) + Vec2{lat.hx / 2, lat.hy / 2};
  const bool c0_positive = s.det_at(lat.point(i, j)) >= 0.0;
  const double tiny = s.tol().det * s.frame_magnitude(c);
  const double center = s.det_at(c);
  if (std::fabs(center) > tiny) return (center >= 0.0) == c0_positive;
  // Quarter-cell samples along both diagonals.
  const Vec2 d1{lat.hx / 4, lat.hy / 4};
  const Vec2 d2{lat.hx / 4, -lat.hy / 4};
  auto same = [&](Vec2 p, bool want_positive) {
    const double v = s.det_at(p);
    return std::fabs(v) > tiny && (v >= 0.0) == want_positive;
  };
  if (same(c + d1, c0_positive) && same(c - d1, c0_positive)) return true;
  if (same(c + d2, !c0_positive) && same(c - d2, !c0_positive)) return false;
  throw SaddleAmbiguity("cannot resolve saddle cell at " + fmt_point(c));
}

// ---------------------------------------------------------------------------
// Tracing

namespace {

struct Segment {
  long from;  // edge ids
  long to;
};

class Tracer {
 public:
  Tracer(const Structure& s, int resolution, Exec exec)
      : s_(s), exec_(exec), lat_(Lattice::over(s.chart(), resolution)) {}

  std::vector<SingularCurve> run() {
    values_ = sample_scalar(s_.det(), lat_, exec_);
    const FrameSamples frame = sample_frame(s_, lat_, exec_);
    double scale = 0.0;
    for (std::size_t n = 0; n < frame.X.size(); ++n) {
      scale = std::max(scale, norm(frame.X[n]) * norm(frame.Y[n]));
    }
    refine_tol_ = s_.tol().refine * std::max(scale, DBL_MIN);

    const int cells_x = lat_.periodic ? lat_.nx : lat_.nx - 1;
    const int cells_y = lat_.periodic ? lat_.ny : lat_.ny - 1;
    for (int j = 0; j < cells_y; ++j) {
      for (int i = 0; i < cells_x; ++i) cell(i, j);
    }
    refine_points();
    return chain();
  }

 private:
  bool positive(int i, int j) const {
    lat_.normalize(i, j);
    return values_[lat_.index(i, j)] >= 0.0;
  }
  double value(int i, int j) const {
    lat_.normalize(i, j);
    return values_[lat_.index(i, j)];
  }
  // Membership in M+ (zero counts with the non-negative side of det).
  bool plus_side(int i, int j) const { return positive(i, j) == (s_.orientation() > 0); }

  long h_edge(int i, int j) const {
    lat_.normalize(i, j);
    return 2 * static_cast<long>(lat_.index(i, j));
  }
  long v_edge(int i, int j) const {
    lat_.normalize(i, j);
    return 2 * static_cast<long>(lat_.index(i, j)) + 1;
  }

  // Linear interpolation of the zero on an edge, in the coordinates of the
  // cell that first touches it.
  void add_crossing(long edge, int i0, int j0, int i1, int j1) {
    if (crossings_.count(edge)) return;
    const double v0 = value(i0, j0);
    const double v1 = value(i1, j1);
    const double t = v0 / (v0 - v1);
    const Vec2 a = lat_.point(i0, j0);
    const Vec2 b = lat_.point(i1, j1);
    crossings_.emplace(edge, a + (b - a) * t);
  }

  void cell(int i, int j) {
    const std::array<std::array<int, 2>, 4> corner{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
    std::array<bool, 4> pos{};
    for (int c = 0; c < 4; ++c) pos[c] = positive(corner[c][0], corner[c][1]);
    // Edges: 0 bottom (c0-c1), 1 right (c1-c2), 2 top (c3-c2), 3 left (c0-c3).
    const std::array<long, 4> edge{h_edge(i, j), v_edge(i + 1, j), h_edge(i, j + 1), v_edge(i, j)};
    const std::array<std::array<int, 2>, 4> ends{{{0, 1}, {1, 2}, {3, 2}, {0, 3}}};
    std::vector<int> crossing;
    for (int e = 0; e < 4; ++e) {
      if (pos[ends[e][0]] != pos[ends[e][1]]) {
        crossing.push_back(e);
        const auto& a = corner[ends[e][0]];
        const auto& b = corner[ends[e][1]];
        add_crossing(edge[e], a[0], a[1], b[0], b[1]);
      }
    }
    if (crossing.empty()) return;

    // Walking the cell boundary counter-clockwise (c0 c1 c2 c3), the curve
    // leaves through the edge that goes from M+ to M- and enters through the
    // one going back; that keeps M+ on its left. Purely combinatorial, so
    // crossings that collapse onto a corner cannot flip it.
    auto emit = [&](int ea, int eb) {
      // Edge e runs from corner e counter-clockwise.
      const bool leaves = plus_side(corner[ea][0], corner[ea][1]);
      if (leaves) {
        segments_.push_back({edge[ea], edge[eb]});
      } else {
        segments_.push_back({edge[eb], edge[ea]});
      }
    };

    if (crossing.size() == 2) {
      emit(crossing[0], crossing[1]);
      return;
    }
    // Saddle: c0, c2 share a sign, c1, c3 the other.
    const bool c0_joined = saddle_joins_c0(s_, lat_, i, j);
    if (c0_joined) {
      emit(0, 1);  // isolates c1
      emit(2, 3);  // isolates c3
    } else {
      emit(0, 3);
      emit(1, 2);
    }
  }

  void refine_points() {
    std::vector<long> ids;
    ids.reserve(crossings_.size());
    for (const auto& [id, p] : crossings_) ids.push_back(id);
    std::vector<Vec2> refined(ids.size());
    const double step = std::max(lat_.hx, lat_.hy);
    std::exception_ptr error;
    const long n = static_cast<long>(ids.size());
#pragma omp parallel for schedule(static) if (exec_ == Exec::Parallel)
    for (long k = 0; k < n; ++k) {
      try {
        refined[k] = refine_onto_locus(s_, crossings_.at(ids[k]), refine_tol_, step);
      } catch (...) {
#pragma omp critical(ars2d_trace_error)
        if (!error) error = std::current_exception();
      }
    }
    if (error) std::rethrow_exception(error);
    for (std::size_t k = 0; k < ids.size(); ++k) crossings_[ids[k]] = refined[k];
  }

  std::vector<SingularCurve> chain() {
    std::map<long, long> out;
    std::map<long, int> in_count;
    for (const Segment& seg : segments_) {
      if (!out.emplace(seg.from, seg.to).second) {
        throw SaddleAmbiguity("inconsistent contour orientation at edge " + std::to_string(seg.from));
      }
      ++in_count[seg.to];
    }
    std::vector<SingularCurve> curves;
    std::map<long, bool> used;
    auto walk = [&](long start, bool closed) {
      SingularCurve c;
      c.id = static_cast<int>(curves.size());
      c.closed = closed;
      c.refine_tol = refine_tol_;
      const Vec2 L = period_of(s_.chart());
      long e = start;
      for (;;) {
        used[e] = true;
        append(c, crossings_.at(e), L);
        auto it = out.find(e);
        if (it == out.end()) break;
        e = it->second;
        if (e == start) break;
      }
      if (closed && c.points.size() > 1) {
        Vec2 first = c.points.front();
        const Vec2 last = c.points.back();
        int kx = 0, ky = 0;
        if (lat_.periodic) {
          kx = static_cast<int>(std::lround((last.x - first.x) / L.x));
          ky = static_cast<int>(std::lround((last.y - first.y) / L.y));
        }
        c.wrap = {kx, ky};
        first = first + Vec2{kx * L.x, ky * L.y};
        if (norm(first - last) < 1e-12 * s_.chart().size()) c.points.pop_back();
      }
      curves.push_back(std::move(c));
    };
    // Open arcs start on the chart boundary.
    for (const auto& [from, to] : out) {
      if (!used[from] && in_count[from] == 0) walk(from, false);
    }
    for (const auto& [from, to] : out) {
      if (!used[from]) walk(from, true);
    }
    return curves;
  }

  void append(SingularCurve& c, Vec2 p, Vec2 L) const {
    if (!c.points.empty() && lat_.periodic) {
      const Vec2 q = c.points.back();
      p.x += std::round((q.x - p.x) / L.x) * L.x;
      p.y += std::round((q.y - p.y) / L.y) * L.y;
    } else if (lat_.periodic) {
      p = s_.chart().wrap(p);
    }
    if (!c.points.empty() && norm(p - c.points.back()) < 1e-12 * s_.chart().size()) return;
    c.points.push_back(p);
  }

  const Structure& s_;
  Exec exec_;
  Lattice lat_;
  std::vector<double> values_;
  double refine_tol_ = 0.0;
  std::unordered_map<long, Vec2> crossings_;
  std::vector<Segment> segments_;
};

}  // namespace

std::vector<SingularCurve> trace_locus(const Structure& s, int resolution, Exec exec) {
  if (resolution < 64) throw InvalidInput("resolution must be at least 64");
  return Tracer(s, resolution, exec).run();
}

// ---------------------------------------------------------------------------
// Tangency points

namespace {

struct Defect {
  double sine;    // cross(unit tangent, distribution direction)
  double cosine;  // dot(unit tangent, distribution direction), made non-negative
};

Defect angle_defect(const Structure& s, Vec2 p) {
  const Vec2 g = s.det_gradient(p);
  Vec2 t = Vec2{g.y, -g.x} * static_cast<double>(s.orientation());
  const double tn = norm(t);
  if (tn == 0.0) throw NotRegular("singular curve has no tangent at " + fmt_point(p));
  t = t * (1.0 / tn);
  Vec2 d = s.line_direction(p);
  if (dot(t, d) < 0.0) d = -d;
  return {cross(t, d), dot(t, d)};
}

}  // namespace

SingularCurve find_tangencies(const Structure& s, SingularCurve w) {
  w.tangencies.clear();
  const std::size_t n = w.size();
  if (n < 2) return w;
  std::vector<Defect> def(n);
  for (std::size_t k = 0; k < n; ++k) def[k] = angle_defect(s, w.points[k]);

  auto neg = [](double v) { return v < 0.0; };
  constexpr double kNearTangent = 0.5;
  const std::size_t segments = w.closed ? n : n - 1;

  if (n >= 3) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!w.closed && (k == 0 || k + 1 == n)) continue;
      const Defect& a = def[(k + n - 1) % n];
      const Defect& b = def[k];
      const Defect& c = def[(k + 1) % n];
      if (b.cosine < kNearTangent) continue;
      const bool touches = neg(a.sine) == neg(c.sine) &&
                           (neg(b.sine) != neg(a.sine) || std::fabs(b.sine) <= 1e-9);
      if (touches) {
        throw TangencyNotTransversal("distribution touches the singular curve without crossing near " +
                                     fmt_point(s.chart().wrap(w.points[k])));
      }
    }
  }

  const double arc_tol = 1e-9 * s.chart().size();
  for (std::size_t k = 0; k < segments; ++k) {
    const std::size_t k1 = (k + 1) % n;
    const Defect& a = def[k];
    const Defect& b = def[k1];
    if (neg(a.sine) == neg(b.sine)) continue;
    if (a.cosine < kNearTangent || b.cosine < kNearTangent) continue;

    const Vec2 p0 = w.points[k];
    const Vec2 p1 = w.next(k, s.chart());
    const double len = norm(p1 - p0);
    double lo = 0.0, hi = 1.0;
    const bool lo_neg = neg(a.sine);
    Vec2 root = p0;
    for (int it = 0; it < 200 && len * (hi - lo) > arc_tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const Vec2 q = refine_onto_locus(s, p0 + (p1 - p0) * mid, w.refine_tol, len);
      if (neg(angle_defect(s, q).sine) == lo_neg) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double t = 0.5 * (lo + hi);
    root = refine_onto_locus(s, p0 + (p1 - p0) * t, w.refine_tol, len);

    TangencyPoint tp;
    tp.location = s.chart().wrap(root);
    tp.contribution = lo_neg ? +1 : -1;
    tp.certificate = s.step3_ratio(root);
    tp.position = static_cast<double>(k) + t;
    if (tp.certificate < s.tol().rank) {
      throw DegeneratePoint(root, "third-step flag is not full at tangency point " + fmt_point(tp.location));
    }
    w.tangencies.push_back(tp);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Number of revolutions

int revolutions(const Structure& s, const SingularCurve& w) {
  if (!w.closed) throw NotClosed("number of revolutions requires a closed curve");
  const std::size_t n = w.size();
  if (n < 3) throw LiftUnstable("closed curve has fewer than three vertices");
  std::vector<double> theta(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 v = w.next(k, s.chart()) - w.prev(k, s.chart());
    const Vec2 d = s.line_direction(w.points[k]);
    theta[k] = reduce_line_angle(std::atan2(cross(v, d), dot(v, d)));
  }
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double step = reduce_line_angle(theta[(k + 1) % n] - theta[k]);
    if (std::fabs(step) > kPi / 4) {
      throw LiftUnstable("distribution angle jumps by " + std::to_string(step) + " rad near " +
                         fmt_point(s.chart().wrap(w.points[k])) + "; increase the resolution");
    }
    total += step;
  }
  const double turns = total / kPi;
  const double rounded = std::round(turns);
  if (std::fabs(turns - rounded) > 0.1) throw LiftUnstable("angle lift does not close up");
  return static_cast<int>(rounded);
}

std::vector<SingularCurve> analyze_locus(const Structure& s, int resolution, Exec exec) {
  std::vector<SingularCurve> curves = trace_locus(s, resolution, exec);
  for (auto& c : curves) {
    c = find_tangencies(s, std::move(c));
    if (c.closed) c.revolutions = revolutions(s, c);
  }
  return curves;
}

}  // namespace ars2d
