#include <algorithm>
#include <cmath>

#include "precut/error.hpp"
#include "precut/tiler.hpp"
#include "raster_internal.hpp"

namespace precut::tiler {

PixelPoint world_to_pixel(double x, double y, int z) {
  if (z < 0 || z > 30) throw Error("zoom level out of range: " + std::to_string(z));
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) throw Error("world coordinate outside the unit square");
  const double scale = std::ldexp(static_cast<double>(kTileSize), z);
  return {x * scale, y * scale};
}

TileAddress tile_of(double x, double y, int z) {
  const auto p = world_to_pixel(x, y, z);
  const int last = (1 << z) - 1;
  return {z, std::min(last, static_cast<int>(p.px / kTileSize)), std::min(last, static_cast<int>(p.py / kTileSize))};
}

bool valid_address(const TileAddress& t) {
  if (t.z < 0 || t.z > 30) return false;
  const long n = 1L << t.z;
  return t.x >= 0 && t.y >= 0 && t.x < n && t.y < n;
}

double RenderStyle::node_radius(int z) const {
  if (node_radius_px.empty()) return 1.0;
  return node_radius_px[std::min<std::size_t>(z, node_radius_px.size() - 1)];
}

double RenderStyle::edge_width(int z) const {
  if (edge_width_px.empty()) return 1.0;
  return edge_width_px[std::min<std::size_t>(z, edge_width_px.size() - 1)];
}

Rgba Image::at(int x, int y) const {
  const auto* p = &rgba[(static_cast<std::size_t>(y) * width + x) * 4];
  return {p[0], p[1], p[2], p[3]};
}

Image Image::crop(int x0, int y0, int w, int h) const {
  Image out{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 4)};
  for (int y = 0; y < h; ++y) {
    const auto* src = &rgba[(static_cast<std::size_t>(y0 + y) * width + x0) * 4];
    std::copy(src, src + static_cast<std::size_t>(w) * 4, &out.rgba[static_cast<std::size_t>(y) * w * 4]);
  }
  return out;
}

namespace detail {

Primitives primitives(const Scene& scene, const RenderStyle& style, int z) {
  Primitives p;
  p.scale = std::ldexp(static_cast<double>(kTileSize), z);
  p.radius = style.node_radius(z);
  p.half_width = 0.5 * style.edge_width(z);
  p.margin = p.radius + style.edge_width(z) + 1.0;
  const double line_pad = p.half_width + 1.0;
  const double disc_pad = p.radius + 1.0;
  p.edge_boxes.reserve(scene.edges.size());
  for (const auto& e : scene.edges) {
    const auto& a = scene.coords[e.a];
    const auto& b = scene.coords[e.b];
    p.edge_boxes.push_back({std::min(a.x, b.x) * p.scale - line_pad, std::min(a.y, b.y) * p.scale - line_pad,
                            std::max(a.x, b.x) * p.scale + line_pad, std::max(a.y, b.y) * p.scale + line_pad});
  }
  p.node_boxes.reserve(scene.coords.size());
  for (const auto& c : scene.coords) {
    p.node_boxes.push_back(
        {c.x * p.scale - disc_pad, c.y * p.scale - disc_pad, c.x * p.scale + disc_pad, c.y * p.scale + disc_pad});
  }
  return p;
}

namespace {

struct Canvas {
  int x0, y0, w, h;
  std::vector<double> rgb;

  void blend(int gx, int gy, const Rgba& c, double cov) {
    if (cov <= 0.0) return;
    if (cov > 1.0) cov = 1.0;
    double* px = &rgb[(static_cast<std::size_t>(gy - y0) * w + (gx - x0)) * 3];
    px[0] += (c.r - px[0]) * cov;
    px[1] += (c.g - px[1]) * cov;
    px[2] += (c.b - px[2]) * cov;
  }

  // Pixel range of a box clipped to the canvas; empty when lo > hi.
  void clip(const Box& b, int& ix0, int& iy0, int& ix1, int& iy1) const {
    ix0 = std::max(x0, static_cast<int>(std::floor(b.x0)));
    iy0 = std::max(y0, static_cast<int>(std::floor(b.y0)));
    ix1 = std::min(x0 + w - 1, static_cast<int>(std::floor(b.x1)));
    iy1 = std::min(y0 + h - 1, static_cast<int>(std::floor(b.y1)));
  }
};

}  // namespace

Image render(const Scene& scene, const RenderStyle& style, const Primitives& p, int x0, int y0, int w, int h,
             std::span<const int> edge_ids, std::span<const int> node_ids) {
  Canvas cv{x0, y0, w, h, std::vector<double>(static_cast<std::size_t>(w) * h * 3)};
  for (std::size_t i = 0; i < cv.rgb.size(); i += 3) {
    cv.rgb[i] = style.background.r;
    cv.rgb[i + 1] = style.background.g;
    cv.rgb[i + 2] = style.background.b;
  }
  int ix0, iy0, ix1, iy1;
  for (int id : edge_ids) {
    const auto& e = scene.edges[id];
    const double ax = scene.coords[e.a].x * p.scale, ay = scene.coords[e.a].y * p.scale;
    const double bx = scene.coords[e.b].x * p.scale, by = scene.coords[e.b].y * p.scale;
    const double dx = bx - ax, dy = by - ay;
    const double len2 = dx * dx + dy * dy;
    cv.clip(p.edge_boxes[id], ix0, iy0, ix1, iy1);
    // Pixels further than this from the segment get no coverage.
    const double reach = p.half_width + 0.5;
    const double len = std::sqrt(len2);
    for (int y = iy0; y <= iy1; ++y) {
      int sx0 = ix0, sx1 = ix1;
      if (std::abs(dy) * 64.0 > len) {
        // Row slice of the band around the infinite line, plus a guard pixel.
        const double xc = ax + (y + 0.5 - ay) * dx / dy;
        const double half = reach * len / std::abs(dy);
        sx0 = std::max(ix0, static_cast<int>(std::floor(xc - half - 0.5)) - 1);
        sx1 = std::min(ix1, static_cast<int>(std::ceil(xc + half - 0.5)) + 1);
      }
      for (int x = sx0; x <= sx1; ++x) {
        const double cx = x + 0.5, cy = y + 0.5;
        double t = len2 > 0.0 ? ((cx - ax) * dx + (cy - ay) * dy) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        const double qx = ax + t * dx - cx, qy = ay + t * dy - cy;
        const double d = std::sqrt(qx * qx + qy * qy);
        cv.blend(x, y, style.edge_color, p.half_width + 0.5 - d);
      }
    }
  }
  for (int id : node_ids) {
    const double nx = scene.coords[id].x * p.scale, ny = scene.coords[id].y * p.scale;
    const Rgba& color = style.palette[static_cast<int>(scene.classes[id])];
    cv.clip(p.node_boxes[id], ix0, iy0, ix1, iy1);
    for (int y = iy0; y <= iy1; ++y) {
      for (int x = ix0; x <= ix1; ++x) {
        const double qx = x + 0.5 - nx, qy = y + 0.5 - ny;
        cv.blend(x, y, color, p.radius + 0.5 - std::sqrt(qx * qx + qy * qy));
      }
    }
  }
  Image img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 4)};
  for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
    for (int c = 0; c < 3; ++c) {
      img.rgba[i * 4 + c] = static_cast<std::uint8_t>(std::clamp(std::lround(cv.rgb[i * 3 + c]), 0L, 255L));
    }
    img.rgba[i * 4 + 3] = 255;
  }
  return img;
}

}  // namespace detail

Image render_region(const Scene& scene, const RenderStyle& style, int z, int x0, int y0, int w, int h) {
  const auto p = detail::primitives(scene, style, z);
  // Cull against the region grown by the bleed margin.
  const detail::Box view{x0 - p.margin, y0 - p.margin, x0 + w + p.margin, y0 + h + p.margin};
  std::vector<int> edges, nodes;
  for (int i = 0; i < static_cast<int>(p.edge_boxes.size()); ++i) {
    if (p.edge_boxes[i].intersects(view)) edges.push_back(i);
  }
  for (int i = 0; i < static_cast<int>(p.node_boxes.size()); ++i) {
    if (p.node_boxes[i].intersects(view)) nodes.push_back(i);
  }
  return detail::render(scene, style, p, x0, y0, w, h, edges, nodes);
}

Image render_level(const Scene& scene, const RenderStyle& style, int z) {
  const auto p = detail::primitives(scene, style, z);
  std::vector<int> edges(scene.edges.size()), nodes(scene.coords.size());
  for (std::size_t i = 0; i < edges.size(); ++i) edges[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i] = static_cast<int>(i);
  const int side = kTileSize << z;
  // Rendered in horizontal bands to bound the working buffer. Every
  // primitive is offered to every band; clipping alone decides coverage.
  Image out{side, side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side * 4)};
  for (int y0 = 0; y0 < side; y0 += kTileSize) {
    const Image band = detail::render(scene, style, p, 0, y0, side, kTileSize, edges, nodes);
    std::copy(band.rgba.begin(), band.rgba.end(), out.rgba.begin() + static_cast<std::ptrdiff_t>(y0) * side * 4);
  }
  return out;
}

Image render_tile(const Scene& scene, const RenderStyle& style, const TileAddress& addr) {
  if (!valid_address(addr)) throw Error("tile address out of range");
  return render_region(scene, style, addr.z, addr.x * kTileSize, addr.y * kTileSize, kTileSize, kTileSize);
}

}  // namespace precut::tiler
