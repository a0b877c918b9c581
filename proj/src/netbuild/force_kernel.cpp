#include <algorithm>
#include <cmath>
#include <limits>

#include "precut/netbuild.hpp"

namespace precut::net {

namespace {

// Uniform bucket grid with cell size equal to the repulsion cutoff.
struct Grid {
  double x0 = 0.0, y0 = 0.0, cell = 1.0;
  int nx = 1, ny = 1;
  std::vector<int> start;  // CSR offsets, nx*ny + 1
  std::vector<int> items;  // node indices, ascending within a cell

  Grid(std::span<const Vec2> pos, double cell_size) : cell(cell_size) {
    double x1 = 0.0, y1 = 0.0;
    if (!pos.empty()) {
      x0 = x1 = pos[0].x;
      y0 = y1 = pos[0].y;
      for (const auto& p : pos) {
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
      }
    }
    nx = std::clamp(static_cast<int>((x1 - x0) / cell) + 1, 1, 4096);
    ny = std::clamp(static_cast<int>((y1 - y0) / cell) + 1, 1, 4096);
    start.assign(static_cast<std::size_t>(nx) * ny + 1, 0);
    std::vector<int> cell_of(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
      cell_of[i] = index(cx(pos[i].x), cy(pos[i].y));
      ++start[cell_of[i] + 1];
    }
    for (std::size_t c = 1; c < start.size(); ++c) start[c] += start[c - 1];
    items.resize(pos.size());
    std::vector<int> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < pos.size(); ++i) items[fill[cell_of[i]]++] = static_cast<int>(i);
  }

  int cx(double x) const { return std::clamp(static_cast<int>((x - x0) / cell), 0, nx - 1); }
  int cy(double y) const { return std::clamp(static_cast<int>((y - y0) / cell), 0, ny - 1); }
  int index(int ix, int iy) const { return iy * nx + ix; }
};

Vec2 node_force(int i, std::span<const Vec2> pos, std::span<const std::vector<int>> mst, const LayoutParams& p,
                const Grid& grid) {
  const double L = p.rest_length;
  const double R = p.cutoff * L;
  const double kr = p.repulsion * L * L * L;
  // Coincident nodes get a tiny deterministic push apart.
  const double eps = 1e-9 * L;
  Vec2 f;
  const Vec2 me = pos[i];
  const int gx = grid.cx(me.x), gy = grid.cy(me.y);
  for (int iy = std::max(0, gy - 1); iy <= std::min(grid.ny - 1, gy + 1); ++iy) {
    for (int ix = std::max(0, gx - 1); ix <= std::min(grid.nx - 1, gx + 1); ++ix) {
      const int c = grid.index(ix, iy);
      for (int k = grid.start[c]; k < grid.start[c + 1]; ++k) {
        const int j = grid.items[k];
        if (j == i) continue;
        double dx = me.x - pos[j].x;
        double dy = me.y - pos[j].y;
        double d2 = dx * dx + dy * dy;
        if (d2 >= R * R) continue;
        if (d2 < eps * eps) {
          dx = i < j ? -eps : eps;
          dy = 0.0;
          d2 = eps * eps;
        }
        const double d = std::sqrt(d2);
        const double mag = kr / d2;
        f.x += mag * dx / d;
        f.y += mag * dy / d;
      }
    }
  }
  for (int j : mst[i]) {
    const double dx = pos[j].x - me.x;
    const double dy = pos[j].y - me.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d <= 0.0) continue;
    const double mag = p.attraction * (d - L);
    f.x += mag * dx / d;
    f.y += mag * dy / d;
  }
  return f;
}

}  // namespace

void accumulate_forces(std::span<const Vec2> pos, std::span<const std::vector<int>> mst_adjacency,
                       const LayoutParams& params, std::span<Vec2> force, Exec exec) {
  const Grid grid(pos, params.cutoff * params.rest_length);
  const long n = static_cast<long>(pos.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) force[i] = node_force(static_cast<int>(i), pos, mst_adjacency, params, grid);
  } else {
    for (long i = 0; i < n; ++i) force[i] = node_force(static_cast<int>(i), pos, mst_adjacency, params, grid);
  }
}

}  // namespace precut::net
