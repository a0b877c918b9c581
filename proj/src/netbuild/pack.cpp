#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

#include "precut/netbuild.hpp"

namespace precut::net {

namespace {

constexpr double kMargin = 1.05;

// Buckets circles by the square covering their margin-inflated disc. Two
// circles conflict only if those squares share a cell.
class CircleGrid {
 public:
  explicit CircleGrid(double cell) : cell_(cell > 0.0 ? cell : 1.0) {}

  void insert(int id, const Circle& c) {
    visit(c, [&](std::int64_t key) { cells_[key].push_back(id); });
  }

  template <class F>
  bool any(const Circle& c, F&& conflict) const {
    bool hit = false;
    visit(c, [&](std::int64_t key) {
      if (hit) return;
      auto it = cells_.find(key);
      if (it == cells_.end()) return;
      for (int id : it->second) {
        if (conflict(id)) {
          hit = true;
          return;
        }
      }
    });
    return hit;
  }

 private:
  template <class F>
  void visit(const Circle& c, F&& f) const {
    const double h = kMargin * c.r;
    const auto x0 = static_cast<std::int64_t>(std::floor((c.x - h) / cell_));
    const auto x1 = static_cast<std::int64_t>(std::floor((c.x + h) / cell_));
    const auto y0 = static_cast<std::int64_t>(std::floor((c.y - h) / cell_));
    const auto y1 = static_cast<std::int64_t>(std::floor((c.y + h) / cell_));
    for (auto y = y0; y <= y1; ++y)
      for (auto x = x0; x <= x1; ++x) f((y << 32) ^ (x & 0xffffffff));
  }

  double cell_;
  std::unordered_map<std::int64_t, std::vector<int>> cells_;
};

bool overlaps(const Circle& a, const Circle& b) {
  const double dx = a.x - b.x, dy = a.y - b.y;
  const double need = kMargin * (a.r + b.r);
  return dx * dx + dy * dy < need * need;
}

}  // namespace

LayoutResult pack_components(int node_count, std::span<const ComponentLayout> layouts) {
  LayoutResult out;
  out.coords.assign(node_count, Vec2{});
  out.component_of.assign(node_count, -1);
  if (layouts.empty()) return out;

  std::vector<Circle> placed(layouts.size());
  placed[0] = {0.0, 0.0, layouts[0].bounding_radius};
  double extent = placed[0].r;
  const double small = layouts.size() > 1 ? layouts[1].bounding_radius : 1.0;
  CircleGrid grid(2.0 * kMargin * small);
  double ring = layouts.size() > 1 ? kMargin * (placed[0].r + small) : 0.0;

  for (std::size_t i = 1; i < layouts.size(); ++i) {
    const double r = layouts[i].bounding_radius;
    Circle c{0.0, 0.0, r};
    bool found = false;
    while (!found) {
      // Beyond this radius every slot is free.
      const double outer = kMargin * (extent + r);
      if (ring >= outer) {
        ring = outer;
        c.x = ring;
        c.y = 0.0;
        break;
      }
      const int slots = std::max(1, static_cast<int>(std::floor(2.0 * std::numbers::pi * ring / (2.0 * kMargin * r))));
      for (int k = 0; k < slots && !found; ++k) {
        const double t = 2.0 * std::numbers::pi * k / slots;
        c.x = ring * std::cos(t);
        c.y = ring * std::sin(t);
        if (overlaps(c, placed[0])) continue;
        found = !grid.any(c, [&](int id) { return overlaps(c, placed[id]); });
      }
      if (!found) ring += 2.0 * kMargin * r;
    }
    placed[i] = c;
    grid.insert(static_cast<int>(i), c);
    extent = std::max(extent, std::hypot(c.x, c.y) + r);
  }

  const double s = 0.48 / extent;
  out.components.resize(layouts.size());
  for (std::size_t i = 0; i < layouts.size(); ++i) {
    const auto& l = layouts[i];
    const Circle& c = placed[i];
    out.components[l.component_id] = {0.5 + s * c.x, 0.5 + s * c.y, s * c.r};
    for (std::size_t k = 0; k < l.nodes.size(); ++k) {
      out.coords[l.nodes[k]] = {0.5 + s * (c.x + l.coords[k].x), 0.5 + s * (c.y + l.coords[k].y)};
      out.component_of[l.nodes[k]] = l.component_id;
    }
  }
  return out;
}

}  // namespace precut::net
