#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "precut/error.hpp"
#include "precut/tiler.hpp"
#include "raster_internal.hpp"

namespace precut::tiler {

namespace fs = std::filesystem;
using nlohmann::json;

long pyramid_tile_count(int z_max) {
  long total = 0;
  for (int z = 0; z <= z_max; ++z) total += 1L << (2 * z);
  return total;
}

namespace {

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write " + path.string());
}

// Tile range [lo, hi] touched by a pixel interval, clamped to the level.
void tile_span(double a, double b, int n, int& lo, int& hi) {
  lo = std::clamp(static_cast<int>(std::floor(a / kTileSize)), 0, n - 1);
  hi = std::clamp(static_cast<int>(std::floor(b / kTileSize)), 0, n - 1);
}

}  // namespace

PyramidManifest generate_pyramid(const Scene& scene, const RenderStyle& style, const fs::path& dir,
                                 const std::string& network_name, int z_max, std::uint64_t seed, Exec exec) {
  if (z_max < 0 || z_max > 12) throw Error("z_max out of range: " + std::to_string(z_max));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("output directory not writable: " + dir.string() + ": " + ec.message());

  const auto blank = encode_png(render_region(Scene{}, style, 0, 0, 0, kTileSize, kTileSize));
  long written = 0;
  for (int z = 0; z <= z_max; ++z) {
    const int n = 1 << z;
    for (int x = 0; x < n; ++x) {
      fs::create_directories(dir / std::to_string(z) / std::to_string(x), ec);
      if (ec) throw Error("output directory not writable: " + dir.string() + ": " + ec.message());
    }
    const auto p = detail::primitives(scene, style, z);
    std::vector<std::vector<int>> edge_bins(static_cast<std::size_t>(n) * n), node_bins(edge_bins.size());
    auto bin = [&](const detail::Box& b, int id, std::vector<std::vector<int>>& bins) {
      int tx0, tx1, ty0, ty1;
      // The margin matches render_region's cull test.
      if (b.x1 < -p.margin || b.y1 < -p.margin) return;
      tile_span(b.x0 - p.margin, b.x1 + p.margin, n, tx0, tx1);
      tile_span(b.y0 - p.margin, b.y1 + p.margin, n, ty0, ty1);
      for (int ty = ty0; ty <= ty1; ++ty)
        for (int tx = tx0; tx <= tx1; ++tx) bins[static_cast<std::size_t>(ty) * n + tx].push_back(id);
    };
    for (int i = 0; i < static_cast<int>(p.edge_boxes.size()); ++i) bin(p.edge_boxes[i], i, edge_bins);
    for (int i = 0; i < static_cast<int>(p.node_boxes.size()); ++i) bin(p.node_boxes[i], i, node_bins);

    const long tiles = static_cast<long>(n) * n;
    std::string failure;
    auto one = [&](long t) {
      const int tx = static_cast<int>(t % n), ty = static_cast<int>(t / n);
      const fs::path file = dir / std::to_string(z) / std::to_string(tx) / (std::to_string(ty) + ".png");
      const auto& eb = edge_bins[t];
      const auto& nb = node_bins[t];
      try {
        if (eb.empty() && nb.empty()) {
          write_file(file, blank);
        } else {
          const auto img = detail::render(scene, style, p, tx * kTileSize, ty * kTileSize, kTileSize, kTileSize, eb, nb);
          write_file(file, encode_png(img));
        }
      } catch (const std::exception& e) {
#pragma omp critical(pyramid_failure)
        if (failure.empty()) failure = e.what();
      }
    };
    if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 8)
      for (long t = 0; t < tiles; ++t) one(t);
    } else {
      for (long t = 0; t < tiles; ++t) one(t);
    }
    if (!failure.empty()) throw Error(failure);
    written += tiles;
    spdlog::debug("pyramid {} level {}: {} tiles", network_name, z, tiles);
  }

  PyramidManifest m;
  m.network_name = network_name;
  m.z_max = z_max;
  m.node_count = static_cast<int>(scene.coords.size());
  m.edge_count = static_cast<int>(scene.edges.size());
  m.palette = style.palette;
  m.seed = seed;
  m.tile_count = written;
  const std::string text = manifest_json(m);
  write_file(dir / "manifest.json", std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return m;
}

std::string manifest_json(const PyramidManifest& m) {
  json palette = json::object();
  for (int c = 0; c < kColorClassCount; ++c) {
    const Rgba& v = m.palette[c];
    palette[std::string(class_name(static_cast<ColorClass>(c)))] = {v.r, v.g, v.b};
  }
  const json j = {{"network_name", m.network_name}, {"z_max", m.z_max},         {"tile_size", m.tile_size},
                  {"node_count", m.node_count},     {"edge_count", m.edge_count}, {"palette", palette},
                  {"seed", m.seed},                 {"tile_count", m.tile_count}};
  return j.dump(2) + "\n";
}

PyramidManifest read_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error("missing pyramid manifest: " + file.string());
  PyramidManifest m;
  try {
    const json j = json::parse(in);
    m.network_name = j.at("network_name").get<std::string>();
    m.z_max = j.at("z_max").get<int>();
    m.tile_size = j.at("tile_size").get<int>();
    m.node_count = j.at("node_count").get<int>();
    m.edge_count = j.at("edge_count").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.tile_count = j.at("tile_count").get<long>();
    for (int c = 0; c < kColorClassCount; ++c) {
      const auto& v = j.at("palette").at(std::string(class_name(static_cast<ColorClass>(c))));
      m.palette[c] = Rgba{v.at(0).get<std::uint8_t>(), v.at(1).get<std::uint8_t>(), v.at(2).get<std::uint8_t>(), 255};
    }
  } catch (const json::exception& e) {
    throw Error("malformed pyramid manifest " + file.string() + ": " + e.what());
  }
  return m;
}

}  // namespace precut::tiler
