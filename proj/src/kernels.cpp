#include "ars2d/kernels.hpp"

#include <array>
#include <exception>
#include <limits>

namespace ars2d {

Lattice Lattice::over(const SurfaceChart& chart, int cells) {
  Lattice l;
  l.origin = {chart.xmin, chart.ymin};
  l.hx = chart.width() / cells;
  l.hy = chart.height() / cells;
  l.periodic = chart.is_torus();
  l.nx = l.ny = l.periodic ? cells : cells + 1;
  return l;
}

Lattice Lattice::refined() const {
  Lattice l = *this;
  l.hx = hx / 2;
  l.hy = hy / 2;
  l.nx = periodic ? 2 * nx : 2 * (nx - 1) + 1;
  l.ny = periodic ? 2 * ny : 2 * (ny - 1) + 1;
  return l;
}

bool Lattice::normalize(int& i, int& j) const {
  if (periodic) {
    i = ((i % nx) + nx) % nx;
    j = ((j % ny) + ny) % ny;
    return true;
  }
  return i >= 0 && i < nx && j >= 0 && j < ny;
}

namespace {

// Runs body(row) for every row; exceptions thrown inside the parallel region
// are captured and the first one rethrown on the calling thread.
template <class Body>
void for_rows(int rows, Exec exec, Body&& body) {
  if (exec == Exec::Serial) {
    for (int j = 0; j < rows; ++j) body(j);
    return;
  }
  std::exception_ptr error;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < rows; ++j) {
    try {
      body(j);
    } catch (...) {
#pragma omp critical(ars2d_kernel_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<double> sample_scalar(const Expr& e, const Lattice& lattice, Exec exec) {
  std::vector<double> out(lattice.size());
  for_rows(lattice.ny, exec, [&](int j) {
    for (int i = 0; i < lattice.nx; ++i) {
      const Vec2 p = lattice.point(i, j);
      out[lattice.index(i, j)] = e.eval(p.x, p.y);
    }
  });
  return out;
}

FrameSamples sample_frame(const Structure& s, const Lattice& lattice, Exec exec) {
  FrameSamples out{std::vector<Vec2>(lattice.size()), std::vector<Vec2>(lattice.size())};
  for_rows(lattice.ny, exec, [&](int j) {
    for (int i = 0; i < lattice.nx; ++i) {
      const Vec2 p = lattice.point(i, j);
      out.X[lattice.index(i, j)] = s.X(p);
      out.Y[lattice.index(i, j)] = s.Y(p);
    }
  });
  return out;
}

std::span<const StencilStep> stencil16() {
  static constexpr std::array<StencilStep, 16> steps{{
      {1, 0}, {0, 1}, {-1, 0}, {0, -1},
      {1, 1}, {-1, 1}, {-1, -1}, {1, -1},
      {2, 1}, {1, 2}, {-1, 2}, {-2, 1},
      {-2, -1}, {-1, -2}, {1, -2}, {2, -1},
  }};
  return steps;
}

std::vector<double> stencil_costs(const Lattice& lattice, const FrameSamples& half,
                                  std::span<const StencilStep> steps, const Tolerances& tol,
                                  Exec exec) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Lattice fine = lattice.refined();
  const std::size_t k = steps.size();
  std::vector<double> out(lattice.size() * k, inf);
  for_rows(lattice.ny, exec, [&](int j) {
    for (int i = 0; i < lattice.nx; ++i) {
      const std::size_t base = lattice.index(i, j) * k;
      for (std::size_t s = 0; s < k; ++s) {
        int ti = i + steps[s].di;
        int tj = j + steps[s].dj;
        if (!lattice.normalize(ti, tj)) continue;
        int mi = 2 * i + steps[s].di;
        int mj = 2 * j + steps[s].dj;
        fine.normalize(mi, mj);
        const std::size_t m = fine.index(mi, mj);
        const Vec2 v{steps[s].di * lattice.hx, steps[s].dj * lattice.hy};
        const double g = metric_cost_from_frame(half.X[m], half.Y[m], v, tol);
        out[base + s] = std::sqrt(g);
      }
    }
  });
  return out;
}

}  // namespace ars2d
