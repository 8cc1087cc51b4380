#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ars2d/ars_model.hpp"

// Data-parallel sampling kernels. Each kernel has a serial reference path and
// an OpenMP path; both visit the same points in the same arithmetic order, so
// their outputs are bitwise identical.

namespace ars2d {

enum class Exec { Serial, Parallel };

/// Regular node lattice. Node (i, j) sits at origin + (i * hx, j * hy) and is
/// stored at index j * nx + i. Periodic lattices wrap in both directions.
struct Lattice {
  Vec2 origin;
  double hx = 0.0;
  double hy = 0.0;
  int nx = 0;
  int ny = 0;
  bool periodic = false;

  /// `cells` cells per side over the chart: cells^2 nodes on a torus,
  /// (cells + 1)^2 on a plane chart.
  static Lattice over(const SurfaceChart& chart, int cells);
  /// Same chart, twice the density (includes all half-step midpoints).
  Lattice refined() const;

  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  Vec2 point(int i, int j) const { return {origin.x + i * hx, origin.y + j * hy}; }
  /// Wraps indices on periodic lattices; returns false when (i, j) falls
  /// outside a non-periodic lattice.
  bool normalize(int& i, int& j) const;
};

struct FrameSamples {
  std::vector<Vec2> X;
  std::vector<Vec2> Y;
};

std::vector<double> sample_scalar(const Expr& e, const Lattice& lattice, Exec exec);
FrameSamples sample_frame(const Structure& s, const Lattice& lattice, Exec exec);

/// One lattice step of the 16-neighbour stencil.
struct StencilStep {
  int di;
  int dj;
};

std::span<const StencilStep> stencil16();

/// Edge lengths sqrt(g(v)) for every node and stencil step, evaluated with the
/// frame at the edge midpoint. `half` must hold frame samples on
/// `lattice.refined()`. Inadmissible or out-of-domain edges are +infinity.
/// Layout: index(node) * steps.size() + k.
std::vector<double> stencil_costs(const Lattice& lattice, const FrameSamples& half,
                                  std::span<const StencilStep> steps, const Tolerances& tol,
                                  Exec exec);

}  // namespace ars2d
