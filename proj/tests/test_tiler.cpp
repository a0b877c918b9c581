#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "precut/error.hpp"
#include "precut/tiler.hpp"
#include "support.hpp"

using namespace precut;
using namespace precut::tiler;
namespace fs = std::filesystem;

namespace {

Scene random_scene(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  Scene s;
  for (int i = 0; i < n; ++i) {
    s.coords.push_back({u(rng), u(rng)});
    s.classes.push_back(static_cast<ColorClass>(rng() % kColorClassCount));
  }
  for (int i = 1; i < n; ++i) s.edges.push_back({int(rng() % i), i});
  std::sort(s.edges.begin(), s.edges.end());
  return s;
}

std::optional<Hit> linear_nearest(const std::vector<net::Vec2>& pts, double x, double y, double r) {
  std::optional<Hit> best;
  double best_d2 = 0;
  for (int i = 0; i < int(pts.size()); ++i) {
    const double dx = pts[i].x - x, dy = pts[i].y - y;
    const double d2 = dx * dx + dy * dy;
    if (d2 <= r * r && (!best || d2 < best_d2)) {
      best = Hit{i, std::sqrt(d2)};
      best_d2 = d2;
    }
  }
  return best;
}

long count_pngs(const fs::path& dir, int z) {
  long n = 0;
  if (!fs::exists(dir / std::to_string(z))) return 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / std::to_string(z))) n += e.path().extension() == ".png";
  return n;
}

}  // namespace

TEST_CASE("world_to_pixel and tile_of") {
  auto p = world_to_pixel(0.5, 0.5, 0);
  CHECK(p.px == 128);
  CHECK(p.py == 128);
  CHECK(tile_of(0.5, 0.5, 0) == TileAddress{0, 0, 0});
  p = world_to_pixel(0.5, 0.5, 1);
  CHECK(p.px == 256);
  CHECK(tile_of(0.5, 0.5, 1) == TileAddress{1, 1, 1});
  for (int z = 0; z <= 6; ++z) {
    CHECK(world_to_pixel(0, 0, z).px == 0);
    CHECK(tile_of(0, 0, z) == TileAddress{z, 0, 0});
    CHECK(tile_of(1, 1, z) == TileAddress{z, (1 << z) - 1, (1 << z) - 1});
  }
  CHECK_THROWS_AS(world_to_pixel(1.01, 0, 0), Error);
  CHECK_THROWS_AS(world_to_pixel(0, -0.01, 0), Error);
  CHECK_THROWS_AS(world_to_pixel(0, 0, -1), Error);
  CHECK(valid_address({2, 3, 3}));
  CHECK_FALSE(valid_address({2, 4, 0}));
  CHECK_FALSE(valid_address({-1, 0, 0}));
}

TEST_CASE("style defaults and palette") {
  RenderStyle style;
  CHECK(style.node_radius(0) == 2.0);
  CHECK(style.node_radius(9) == style.node_radius_px.back());
  CHECK(style.edge_width(2) == 0.75);
  const auto& pal = default_palette();
  CHECK(pal[int(ColorClass::Kinase)] == Rgba{0, 0, 255, 255});
  CHECK(pal[int(ColorClass::IonChannel)] == Rgba{135, 206, 235, 255});
  CHECK(pal[int(ColorClass::Multiple)] == Rgba{0, 0, 0, 255});
  for (int c = 0; c < kColorClassCount; ++c) {
    const auto cls = static_cast<ColorClass>(c);
    CHECK(parse_class(class_name(cls)) == cls);
  }
  CHECK(parse_class("ion channel") == ColorClass::IonChannel);
  CHECK(parse_class("Nuclear receptor") == ColorClass::Nuclear);
  CHECK_FALSE(parse_class("transporter"));
}

TEST_CASE("render: empty scene is background") {
  const RenderStyle style;
  const auto img = render_tile(Scene{}, style, {2, 1, 3});
  CHECK(img.width == 256);
  for (int y = 0; y < 256; y += 17)
    for (int x = 0; x < 256; x += 13) CHECK(img.at(x, y) == style.background);
}

TEST_CASE("render: centre node spreads into four tiles at z=1") {
  Scene s;
  s.coords = {{0.5, 0.5}};
  s.classes = {ColorClass::GPCR};
  const RenderStyle style;
  CHECK(render_tile(s, style, {1, 1, 1}).at(0, 0) != style.background);
  CHECK(render_tile(s, style, {1, 0, 0}).at(255, 255) != style.background);
  CHECK(render_tile(s, style, {1, 1, 0}).at(0, 255) != style.background);
  CHECK(render_tile(s, style, {1, 0, 1}).at(255, 0) != style.background);
  CHECK(render_tile(s, style, {1, 1, 1}).at(10, 10) == style.background);

  // Palette law: a lone node's centre pixel is exactly its class colour.
  s.coords = {{0.3 + 0.5 / 1024, 0.6 + 0.5 / 1024}};
  for (int c = 0; c < kColorClassCount; ++c) {
    s.classes = {static_cast<ColorClass>(c)};
    const auto t = tile_of(s.coords[0].x, s.coords[0].y, 2);
    const auto img = decode_png(encode_png(render_tile(s, style, t)));
    const auto p = world_to_pixel(s.coords[0].x, s.coords[0].y, 2);
    CHECK(img.at(int(p.px) - 256 * t.x, int(p.py) - 256 * t.y) == style.palette[c]);
  }
}

TEST_CASE("render: stitched tiles equal the full level") {
  const auto s = random_scene(300, 1);
  const RenderStyle style;
  std::mt19937_64 rng(2);
  for (int z = 0; z <= 4; ++z) {
    const auto full = render_level(s, style, z);
    CHECK(full.width == 256 << z);
    const int n = 1 << z;
    for (int k = 0; k < std::min(n * n, 8); ++k) {
      const TileAddress t{z, int(rng() % n), int(rng() % n)};
      CAPTURE(z);
      CHECK(render_tile(s, style, t) == full.crop(256 * t.x, 256 * t.y, 256, 256));
    }
  }
  const auto full = render_level(s, style, 1);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) CHECK(render_tile(s, style, {1, x, y}) == full.crop(256 * x, 256 * y, 256, 256));
}

TEST_CASE("render: edge pixels follow the distance to the segment") {
  RenderStyle style;
  style.edge_width_px = {5.0};
  const int z = 2;
  const double half = 0.5 * style.edge_width(z), reach = half + 0.5, keep_out = style.node_radius(z) + 1.5;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < 40; ++k) {
    Scene s;
    s.coords = {{u(rng), u(rng)}, {u(rng), u(rng)}};
    // A few near-horizontal and near-vertical segments.
    if (k % 10 == 1) s.coords[1].y = s.coords[0].y + 1e-4;
    if (k % 10 == 2) s.coords[1].x = s.coords[0].x + 1e-4;
    s.classes = {ColorClass::GPCR, ColorClass::Kinase};
    s.edges = {{0, 1}};
    const auto img = render_level(s, style, z);
    const auto a = world_to_pixel(s.coords[0].x, s.coords[0].y, z);
    const auto b = world_to_pixel(s.coords[1].x, s.coords[1].y, z);
    int wrong = 0;
    for (int y = 0; y < img.height; ++y) {
      for (int x = 0; x < img.width; ++x) {
        const double cx = x + 0.5, cy = y + 0.5;
        if (std::hypot(cx - a.px, cy - a.py) < keep_out || std::hypot(cx - b.px, cy - b.py) < keep_out) continue;
        const double vx = b.px - a.px, vy = b.py - a.py;
        const double t = std::clamp(((cx - a.px) * vx + (cy - a.py) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
        const double d = std::hypot(a.px + t * vx - cx, a.py + t * vy - cy);
        if (d > reach + 1e-9 && img.at(x, y) != style.background) ++wrong;
        if (d < half - 0.5 - 1e-9 && img.at(x, y) != style.edge_color) ++wrong;
      }
    }
    CAPTURE(k);
    CHECK(wrong == 0);
  }
}

TEST_CASE("png round trip") {
  const auto img = render_level(random_scene(50, 3), RenderStyle{}, 0);
  const auto bytes = encode_png(img);
  CHECK(bytes.size() > 8);
  CHECK(decode_png(bytes) == img);
  CHECK(encode_png(img) == bytes);
  const std::vector<std::uint8_t> junk{1, 2, 3};
  CHECK_THROWS_AS(decode_png(junk), Error);
}

TEST_CASE("pyramid: counts, manifest, determinism") {
  CHECK(pyramid_tile_count(2) == 21);
  CHECK(pyramid_tile_count(6) == 5461);
  const auto s = random_scene(120, 4);
  const RenderStyle style;
  testing::TempDir a("pyr"), b("pyr");
  const auto m = generate_pyramid(s, style, a.path(), "demo", 3, 9, Exec::Parallel);
  generate_pyramid(s, style, b.path(), "demo", 3, 9, Exec::Serial);
  CHECK(m.tile_count == 85);
  for (int z = 0; z <= 3; ++z) CHECK(count_pngs(a.path(), z) == 1L << (2 * z));
  for (const auto& e : fs::recursive_directory_iterator(a.path())) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), a.path());
    CHECK(testing::slurp(e.path()) == testing::slurp(b.path() / rel));
  }
  const auto back = read_manifest(a / "manifest.json");
  CHECK(back.network_name == "demo");
  CHECK(back.z_max == 3);
  CHECK(back.tile_count == 85);
  CHECK(back.node_count == 120);
  CHECK(back.edge_count == 119);
  CHECK(back.seed == 9);
  CHECK(back.palette == style.palette);

  // Tiles on disk equal the in-memory renders.
  const auto full = render_level(s, style, 2);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) {
      const auto bytes = testing::slurp(a / ("2/" + std::to_string(x) + "/" + std::to_string(y) + ".png"));
      const std::vector<std::uint8_t> v(bytes.begin(), bytes.end());
      CHECK(decode_png(v) == full.crop(256 * x, 256 * y, 256, 256));
    }
}

TEST_CASE("spatial index: exact against linear scan") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int n : {0, 1, 7, 500, 3000}) {
    std::vector<net::Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    // Duplicates and a dense cluster stress leaf splitting and ties.
    for (int k = 0; k < n / 10; ++k) pts[k] = pts[n - 1 - k];
    for (int k = 0; k < n / 5; ++k) pts[k + n / 10] = {0.25 + 1e-7 * k, 0.25};
    const SpatialIndex index(pts);
    CHECK(index.size() == n);
    for (int q = 0; q < 1000; ++q) {
      const double x = u(rng), y = u(rng), r = 0.002 + 0.05 * u(rng);
      const auto got = index.nearest(x, y, r);
      const auto want = linear_nearest(pts, x, y, r);
      REQUIRE(got.has_value() == want.has_value());
      if (got) {
        CHECK(got->node == want->node);
        CHECK(got->distance == want->distance);
      }
    }
    for (int i = 0; i < n; i += std::max(1, n / 50)) {
      const auto hit = index.nearest(pts[i].x, pts[i].y, 1e-3);
      REQUIRE(hit);
      CHECK(hit->distance == 0.0);
      CHECK(pts[hit->node] == pts[i]);
      CHECK(hit->node <= i);
    }
  }
  const std::vector<net::Vec2> one{{0.5, 0.5}};
  CHECK_FALSE(SpatialIndex(one).nearest(0.1, 0.1, 0.01));
}
