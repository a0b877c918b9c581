#pragma once

#include <span>
#include <vector>

#include "precut/tiler.hpp"

namespace precut::tiler::detail {

struct Box {
  double x0, y0, x1, y1;
  bool intersects(const Box& o) const { return x0 <= o.x1 && o.x0 <= x1 && y0 <= o.y1 && o.y0 <= y1; }
};

// Level-z pixel geometry shared by region and pyramid rendering.
struct Primitives {
  double scale = 0.0;
  double radius = 0.0;
  double half_width = 0.0;
  double margin = 0.0;
  std::vector<Box> edge_boxes;
  std::vector<Box> node_boxes;
};

Primitives primitives(const Scene& scene, const RenderStyle& style, int z);

// Draws the listed edges then the listed nodes. Ids must be ascending.
Image render(const Scene& scene, const RenderStyle& style, const Primitives& p, int x0, int y0, int w, int h,
             std::span<const int> edge_ids, std::span<const int> node_ids);

}  // namespace precut::tiler::detail
