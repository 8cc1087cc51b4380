#pragma once

#include <vector>

#include "ars2d/ars_model.hpp"
#include "ars2d/kernels.hpp"

namespace ars2d {

class Unreachable : public Error {
 public:
  Unreachable(const std::string& what, int resolution) : Error(what), resolution_(resolution) {}
  int resolution() const { return resolution_; }

 private:
  int resolution_;
};

class StepUnstable : public Error {
 public:
  using Error::Error;
};

class InadmissibleSample : public Error {
 public:
  using Error::Error;
};

/// Single-source shortest paths on the chart lattice with the 16-neighbour
/// stencil; edge lengths use the sub-Riemannian cost at the edge midpoint.
struct GridSolution {
  int resolution = 0;
  Vec2 source;
  Lattice lattice;
  std::vector<double> dist;
  std::vector<long> pred;  // -1 at the source and at unreached nodes

  /// Nearest lattice node (wrapped on a torus, clamped on a plane chart).
  std::size_t snap(Vec2 q) const;
  Vec2 node(std::size_t k) const;
  double at(Vec2 q) const { return dist[snap(q)]; }
};

GridSolution solve_grid(const Structure& s, Vec2 source, int resolution, Exec exec = Exec::Parallel);

/// Node-snapped distance estimate. Throws Unreachable when the lattice has no
/// finite path between the snapped nodes.
double cc_distance_grid(const Structure& s, Vec2 p, Vec2 q, int resolution = 512);

/// Sampled curve with the controls realising its velocity: q' = a X(q) + b Y(q).
struct AdmissibleCurve {
  std::vector<double> t;
  std::vector<Vec2> q;
  std::vector<Vec2> control;   // (a, b)
  std::vector<Vec2> covector;  // filled by geodesic_shoot only

  Vec2 endpoint() const { return q.back(); }
  double duration() const { return t.back() - t.front(); }
};

double hamiltonian(const Structure& s, Vec2 q, Vec2 p);

/// RK4 integration of the normal Hamiltonian flow of H = ((p.X)^2 + (p.Y)^2) / 2.
/// Throws StepUnstable when H drifts by more than 1e-6 relative.
AdmissibleCurve geodesic_shoot(const Structure& s, Vec2 start, Vec2 covector, double duration, int steps);

/// Controls recovered from sampled positions by minimal-norm solves of the
/// finite-difference velocity.
AdmissibleCurve admissible_from_samples(const Structure& s, std::vector<double> t, std::vector<Vec2> q);

/// Largest per-step |dq - (v_k + v_{k+1}) dt / 2| with v = a X + b Y.
double reconstruction_defect(const Structure& s, const AdmissibleCurve& c);

/// Trapezoid rule for the integral of sqrt(g(q')).
double curve_length(const Structure& s, const AdmissibleCurve& c);

struct BallBoxFit {
  double exponent = 0.0;
  std::vector<double> h;  // effective (node-snapped) offsets
  std::vector<double> d;
};

/// Least-squares slope of log d(p, p + h dir) against log h over 8
/// log-spaced offsets in [h_min, h_max].
BallBoxFit ballbox_fit(const Structure& s, Vec2 p, Vec2 direction, double h_min, double h_max,
                       int resolution = 512);
double ballbox_exponent(const Structure& s, Vec2 p, Vec2 direction, double h_min, double h_max,
                        int resolution = 512);

}  // namespace ars2d
