#include <algorithm>
#include <cmath>
#include <numeric>

#include "precut/tiler.hpp"

namespace precut::tiler {

SpatialIndex::SpatialIndex(std::vector<net::Vec2> points, int leaf_size) : points_(std::move(points)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0);
  if (points_.empty()) return;
  Cell root{points_[0].x, points_[0].y, points_[0].x, points_[0].y, -1, 0, size()};
  for (const auto& p : points_) {
    root.x0 = std::min(root.x0, p.x);
    root.y0 = std::min(root.y0, p.y);
    root.x1 = std::max(root.x1, p.x);
    root.y1 = std::max(root.y1, p.y);
  }
  cells_.push_back(root);
  split(0, 0, std::max(1, leaf_size));
}

void SpatialIndex::split(int cell, int depth, int leaf_size) {
  Cell c = cells_[cell];
  if (c.end - c.begin <= leaf_size || depth >= 24) return;
  const double mx = 0.5 * (c.x0 + c.x1), my = 0.5 * (c.y0 + c.y1);
  auto first = order_.begin() + c.begin, last = order_.begin() + c.end;
  // Quadrant order: (low x, low y), (high x, low y), (low x, high y), (high x, high y).
  auto mid_y = std::stable_partition(first, last, [&](int i) { return points_[i].y < my; });
  auto q1 = std::stable_partition(first, mid_y, [&](int i) { return points_[i].x < mx; });
  auto q3 = std::stable_partition(mid_y, last, [&](int i) { return points_[i].x < mx; });
  const int b0 = c.begin, b1 = static_cast<int>(q1 - order_.begin()), b2 = static_cast<int>(mid_y - order_.begin()),
            b3 = static_cast<int>(q3 - order_.begin()), b4 = c.end;
  const int child = static_cast<int>(cells_.size());
  cells_[cell].child = child;
  cells_.push_back({c.x0, c.y0, mx, my, -1, b0, b1});
  cells_.push_back({mx, c.y0, c.x1, my, -1, b1, b2});
  cells_.push_back({c.x0, my, mx, c.y1, -1, b2, b3});
  cells_.push_back({mx, my, c.x1, c.y1, -1, b3, b4});
  for (int k = 0; k < 4; ++k) split(child + k, depth + 1, leaf_size);
}

void SpatialIndex::search(int cell, double x, double y, double& best_d2, int& best) const {
  const Cell& c = cells_[cell];
  const double dx = std::max({c.x0 - x, 0.0, x - c.x1});
  const double dy = std::max({c.y0 - y, 0.0, y - c.y1});
  if (dx * dx + dy * dy > best_d2) return;
  if (c.child < 0) {
    for (int k = c.begin; k < c.end; ++k) {
      const int i = order_[k];
      const double ex = points_[i].x - x, ey = points_[i].y - y;
      const double d2 = ex * ex + ey * ey;
      if (d2 < best_d2 || (d2 == best_d2 && (best < 0 || i < best))) {
        best_d2 = d2;
        best = i;
      }
    }
    return;
  }
  for (int k = 0; k < 4; ++k) search(c.child + k, x, y, best_d2, best);
}

std::optional<Hit> SpatialIndex::nearest(double x, double y, double radius) const {
  if (cells_.empty() || !(radius >= 0.0)) return std::nullopt;
  double best_d2 = radius * radius;
  int best = -1;
  search(0, x, y, best_d2, best);
  if (best < 0) return std::nullopt;
  return Hit{best, std::sqrt(best_d2)};
}

}  // namespace precut::tiler
