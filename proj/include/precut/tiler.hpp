#pragma once

// Tile pyramid rendering and node hit-testing.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "precut/classes.hpp"
#include "precut/exec.hpp"
#include "precut/netbuild.hpp"

namespace precut::tiler {

inline constexpr int kTileSize = 256;
inline constexpr int kDefaultZMax = 6;

struct TileAddress {
  int z = 0;
  int x = 0;
  int y = 0;
  friend bool operator==(const TileAddress&, const TileAddress&) = default;
};

struct PixelPoint {
  double px = 0.0;
  double py = 0.0;
};

// Throws Error for coordinates outside [0,1] or a negative zoom.
PixelPoint world_to_pixel(double x, double y, int z);
// Tile containing a world point; x = 1 maps to the last column.
TileAddress tile_of(double x, double y, int z);
bool valid_address(const TileAddress& t);

struct RenderStyle {
  // Indexed by zoom; levels past the end reuse the last entry.
  std::vector<double> node_radius_px{2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0};
  std::vector<double> edge_width_px{0.5, 0.6, 0.75, 0.9, 1.0, 1.25, 1.5};
  Rgba background{255, 255, 255, 255};
  Rgba edge_color{200, 200, 200, 255};
  Palette palette = default_palette();

  double node_radius(int z) const;
  double edge_width(int z) const;
};

// What gets drawn: world coordinates, MST edges, per-node class.
// Nodes are drawn in index order, which is node id order.
struct Scene {
  std::vector<net::Vec2> coords;
  std::vector<net::Edge> edges;
  std::vector<ColorClass> classes;
};

struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgba;  // row-major, 4 bytes per pixel

  Rgba at(int x, int y) const;
  Image crop(int x0, int y0, int w, int h) const;
  friend bool operator==(const Image&, const Image&) = default;
};

// Renders the level-z pixel rectangle [x0, x0+w) x [y0, y0+h).
Image render_region(const Scene& scene, const RenderStyle& style, int z, int x0, int y0, int w, int h);
// Whole level as one 256*2^z image. Used as the reference for tile crops.
Image render_level(const Scene& scene, const RenderStyle& style, int z);
Image render_tile(const Scene& scene, const RenderStyle& style, const TileAddress& addr);

std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> bytes);

struct PyramidManifest {
  std::string network_name;
  int z_max = 0;
  int tile_size = kTileSize;
  int node_count = 0;
  int edge_count = 0;
  Palette palette = default_palette();
  std::uint64_t seed = 0;
  long tile_count = 0;
};

// Writes {dir}/{z}/{x}/{y}.png for z in 0..z_max, then {dir}/manifest.json.
PyramidManifest generate_pyramid(const Scene& scene, const RenderStyle& style, const std::filesystem::path& dir,
                                 const std::string& network_name, int z_max, std::uint64_t seed,
                                 Exec exec = Exec::Parallel);
std::string manifest_json(const PyramidManifest& m);
PyramidManifest read_manifest(const std::filesystem::path& file);

// Sum of 4^z for z in 0..z_max.
long pyramid_tile_count(int z_max);

struct Hit {
  int node = -1;
  double distance = 0.0;
};

// Bucket quadtree over world coordinates. Nearest queries are exact; ties go
// to the smaller node index.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  explicit SpatialIndex(std::vector<net::Vec2> points, int leaf_size = 16);

  std::optional<Hit> nearest(double x, double y, double radius) const;
  int size() const { return static_cast<int>(points_.size()); }

 private:
  struct Cell {
    double x0, y0, x1, y1;
    int child = -1;  // index of first of 4 children, -1 for a leaf
    int begin = 0, end = 0;
  };
  void split(int cell, int depth, int leaf_size);
  void search(int cell, double x, double y, double& best_d2, int& best) const;

  std::vector<net::Vec2> points_;
  std::vector<int> order_;
  std::vector<Cell> cells_;
};

}  // namespace precut::tiler
