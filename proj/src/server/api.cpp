#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "precut/error.hpp"
#include "precut/ingest.hpp"
#include "precut/mmp.hpp"
#include "precut/pipeline.hpp"
#include "precut/server.hpp"
#include "precut/store.hpp"
#include "precut/tiler.hpp"
#include "precut/tsv.hpp"

namespace precut::server {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct NetworkData {
  std::string name;
  net::NetworkGraph graph;
  net::LayoutResult layout;
  std::vector<ColorClass> classes;
  tiler::SpatialIndex index;
  tiler::PyramidManifest manifest;
  fs::path tiles;
};

struct FragmentInfo {
  int heavy_atoms = 0;
  std::set<std::string> compounds;  // sorted ids
};

Response json_response(const json& j, int status = 200) {
  Response r;
  r.status = status;
  r.body = j.dump();
  return r;
}

Response error(int status, const std::string& code, const std::string& message) {
  return json_response({{"error", {{"status", status}, {"code", code}, {"message", message}}}}, status);
}

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t i = 0;
  while (i <= path.size()) {
    const auto j = path.find('/', i);
    const auto end = j == std::string_view::npos ? path.size() : j;
    if (end > i) parts.emplace_back(path.substr(i, end - i));
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return parts;
}

bool parse_int(const std::string& s, long& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_real(const std::string& s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(out);
}

std::string rgb_hex(const Rgba& c) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
  return buf;
}

}  // namespace

struct Api::Data {
  std::map<std::string, ingest::CompoundRecord> compounds;
  std::map<std::string, std::vector<ingest::ActivityRecord>> activities;
  std::map<std::string, std::set<std::string>> compound_fragments;  // id -> key and value texts
  std::map<std::string, FragmentInfo> fragments;
  std::map<std::string, std::vector<mmp::MmpRecord>> mmps;  // both directions
  std::map<std::string, NetworkData> networks;
};

Api::Api(const fs::path& root, ApiOptions options) : data_(std::make_unique<Data>()), options_(options) {
  const auto s = store::Store::open(root, true);
  auto text = [&](const std::string& rel) { return std::istringstream(s.read_text(rel)); };
  if (!s.has_stage("ingest")) throw Error("store has no ingested corpus: " + root.string());

  auto ci = text("corpus/compounds.tsv");
  for (auto& c : ingest::read_compounds(ci)) data_->compounds.emplace(c.compound_id, std::move(c));
  auto ai = text("corpus/activities.tsv");
  for (auto& a : ingest::load_activities(ai)) data_->activities[a.compound_id].push_back(std::move(a));

  if (s.has_stage("mmp")) {
    auto fi = text("mmp/fragments.tsv");
    const auto index = mmp::read_fragment_index(fi);
    for (const auto& r : index) {
      auto& v = data_->fragments[r.value];
      v.heavy_atoms = r.value_heavy_atoms;
      v.compounds.insert(r.compound_id);
      auto& k = data_->fragments[r.key];
      if (k.compounds.empty()) k.heavy_atoms = chem::parse_smiles(r.key).heavy_atom_count();
      k.compounds.insert(r.compound_id);
      data_->compound_fragments[r.compound_id].insert(r.key);
      data_->compound_fragments[r.compound_id].insert(r.value);
    }
    auto mi = text("mmp/mmps.tsv");
    for (const auto& m : mmp::read_mmps(mi)) {
      data_->mmps[m.compound_a].push_back(m);
      data_->mmps[m.compound_b].push_back({m.compound_b, m.compound_a, m.key, m.value_b, m.value_a, m.cut_count});
    }
    for (auto& [id, list] : data_->mmps) std::sort(list.begin(), list.end());
  }

  for (const auto& name : pipeline::store_networks(s)) {
    const std::string manifest = pipeline::tile_dir(name) + "/manifest.json";
    const std::string layout = pipeline::layout_dir(name) + "/layout.tsv";
    if (!s.files().count(manifest) || !s.files().count(layout)) continue;
    NetworkData n;
    n.name = name;
    auto ni = text(pipeline::graph_dir(name) + "/nodes.tsv");
    auto pi = text(pipeline::graph_dir(name) + "/pairs.tsv");
    const auto nodes = net::read_nodes(ni);
    n.graph = net::build_graph(net::read_pairs(pi), nodes);
    auto li = text(layout);
    auto mi = text(pipeline::layout_dir(name) + "/mst.tsv");
    n.layout = net::read_layout(li, mi, n.graph);
    for (const auto& node : n.graph.nodes()) {
      if (node.kind == net::NodeKind::Fragment) {
        n.classes.push_back(ColorClass::RingFragment);
      } else {
        auto it = data_->compounds.find(node.id);
        n.classes.push_back(it == data_->compounds.end() ? ColorClass::Other : it->second.color_class);
      }
    }
    // Rebuilt from the layout on load rather than persisted.
    n.index = tiler::SpatialIndex(n.layout.coords);
    n.manifest = tiler::read_manifest(s.path(manifest));
    n.tiles = s.path(pipeline::tile_dir(name));
    data_->networks.emplace(name, std::move(n));
  }
  spdlog::info("store loaded: {} compounds, {} networks", data_->compounds.size(), data_->networks.size());
}

Api::~Api() = default;
Api::Api(Api&&) noexcept = default;

namespace {

json node_json(const NetworkData& n, int i) {
  const auto& node = n.graph.node(i);
  return {{"id", node.id},
          {"kind", std::string(net::kind_name(node.kind))},
          {"x", n.layout.coords[i].x},
          {"y", n.layout.coords[i].y},
          {"component", n.layout.component_of[i]},
          {"color_class", std::string(class_name(n.classes[i]))}};
}

}  // namespace

Response Api::get(std::string_view path, const Query& query) const {
  const auto parts = split_path(path);
  const auto& d = *data_;
  auto q = [&](const char* key) -> const std::string* {
    auto it = query.find(key);
    return it == query.end() ? nullptr : &it->second;
  };

  if (parts.size() == 1 && parts[0] == "networks") {
    json list = json::array();
    for (const auto& [name, n] : d.networks) {
      json palette = json::object();
      for (int c = 0; c < kColorClassCount; ++c) {
        palette[std::string(class_name(static_cast<ColorClass>(c)))] = rgb_hex(n.manifest.palette[c]);
      }
      list.push_back({{"name", name},
                      {"node_count", n.manifest.node_count},
                      {"edge_count", n.manifest.edge_count},
                      {"graph_edge_count", n.graph.edge_count()},
                      {"z_max", n.manifest.z_max},
                      {"tile_size", n.manifest.tile_size},
                      {"tile_count", n.manifest.tile_count},
                      {"seed", n.manifest.seed},
                      {"palette", palette}});
    }
    return json_response(list);
  }

  if (parts.size() == 5 && parts[0] == "tiles") {
    auto it = d.networks.find(parts[1]);
    if (it == d.networks.end()) return error(404, "unknown_network", "no network '" + parts[1] + "'");
    const auto& n = it->second;
    long z, x, y;
    const std::string& last = parts[4];
    if (last.size() < 5 || last.substr(last.size() - 4) != ".png" || !parse_int(parts[2], z) ||
        !parse_int(parts[3], x) || !parse_int(last.substr(0, last.size() - 4), y)) {
      return error(404, "unknown_tile", "malformed tile address");
    }
    if (z < 0 || z > n.manifest.z_max || !tiler::valid_address({int(z), int(x), int(y)})) {
      return error(404, "unknown_tile", "tile address out of range");
    }
    std::ifstream in(n.tiles / parts[2] / parts[3] / last, std::ios::binary);
    if (!in) return error(500, "store_fault", "tile file missing from store");
    std::ostringstream ss;
    ss << in.rdbuf();
    Response r;
    r.content_type = "image/png";
    r.body = ss.str();
    r.headers = {{"Cache-Control", "public, max-age=31536000, immutable"},
                 {"ETag", "\"" + store::hex32(store::crc32_text(r.body)) + "\""}};
    return r;
  }

  if (parts.size() == 4 && parts[0] == "networks" && parts[2] == "nodes") {
    auto it = d.networks.find(parts[1]);
    if (it == d.networks.end()) return error(404, "unknown_network", "no network '" + parts[1] + "'");
    const auto& n = it->second;
    if (parts[3] == "near") {
      double x, y;
      long z;
      const auto *qx = q("x"), *qy = q("y"), *qz = q("z");
      if (!qx || !qy || !qz || !parse_real(*qx, x) || !parse_real(*qy, y) || !parse_int(*qz, z)) {
        return error(400, "bad_query", "near needs numeric x, y and integer z");
      }
      if (x < 0 || x > 1 || y < 0 || y > 1 || z < 0 || z > 30) {
        return error(400, "bad_query", "x and y must lie in [0,1] and z in 0..30");
      }
      const double radius = options_.hit_radius_px / std::ldexp(double(tiler::kTileSize), int(z));
      const auto hit = n.index.nearest(x, y, radius);
      if (!hit) return json_response({{"node", nullptr}});
      json node = node_json(n, hit->node);
      node["distance"] = hit->distance;
      return json_response({{"node", node}});
    }
    const int i = n.graph.index_of(parts[3]);
    if (i < 0) return error(404, "unknown_node", "'" + parts[3] + "' is not in network '" + parts[1] + "'");
    return json_response(node_json(n, i));
  }

  if (parts.size() >= 2 && parts.size() <= 3 && parts[0] == "compounds") {
    auto it = d.compounds.find(parts[1]);
    if (it == d.compounds.end()) return error(404, "unknown_compound", "no compound '" + parts[1] + "'");
    const auto& c = it->second;
    if (parts.size() == 2) {
      json acts = json::array();
      if (auto a = d.activities.find(c.compound_id); a != d.activities.end()) {
        for (const auto& r : a->second) {
          acts.push_back({{"assay_id", r.assay_id},
                          {"target_id", r.target_id},
                          {"target_class", r.target_class},
                          {"type", r.type},
                          {"relation", r.relation},
                          {"value", r.value},
                          {"units", r.units},
                          {"journal", r.journal},
                          {"year", r.year}});
        }
      }
      return json_response({{"id", c.compound_id},
                            {"smiles", c.smiles},
                            {"canonical", c.canonical},
                            {"descriptors",
                             {{"molecular_weight", c.descriptors.molecular_weight},
                              {"hbd", c.descriptors.hbd},
                              {"hba", c.descriptors.hba},
                              {"heavy_atoms", c.descriptors.heavy_atoms}}},
                            {"logp", c.logp ? json(*c.logp) : json(nullptr)},
                            {"itcs", c.itcs},
                            {"color_class", std::string(class_name(c.color_class))},
                            {"activities", acts},
                            {"depiction_svg", chem::depict_svg(c.graph)}});
    }
    if (parts[2] == "fragments") {
      json list = json::array();
      if (auto f = d.compound_fragments.find(c.compound_id); f != d.compound_fragments.end()) {
        for (const auto& text : f->second) {
          const auto& info = d.fragments.at(text);
          list.push_back({{"text", text},
                          {"heavy_atoms", info.heavy_atoms},
                          {"occurrences", static_cast<int>(info.compounds.size())}});
        }
      }
      return json_response({{"compound", c.compound_id}, {"fragments", list}});
    }
    if (parts[2] == "mmps") {
      json list = json::array();
      if (auto m = d.mmps.find(c.compound_id); m != d.mmps.end()) {
        for (const auto& r : m->second) {
          json coords = json::object();
          for (const auto& [name, n] : d.networks) {
            const int i = n.graph.index_of(r.compound_b);
            if (i >= 0) coords[name] = {{"x", n.layout.coords[i].x}, {"y", n.layout.coords[i].y}};
          }
          list.push_back({{"partner", r.compound_b},
                          {"key", r.key},
                          {"value", r.value_a},
                          {"partner_value", r.value_b},
                          {"cut_count", r.cut_count},
                          {"partner_coords", coords}});
        }
      }
      return json_response({{"compound", c.compound_id}, {"partners", list}});
    }
    return error(404, "not_found", "no such endpoint");
  }

  if (parts.size() == 3 && parts[0] == "fragments" && parts[2] == "compounds") {
    auto it = d.fragments.find(parts[1]);
    if (it == d.fragments.end()) return error(404, "unknown_fragment", "no fragment '" + parts[1] + "'");
    long page = 1, size = options_.default_page_size;
    if (const auto* p = q("page"); p && (!parse_int(*p, page) || page < 1)) {
      return error(400, "bad_query", "page must be a positive integer");
    }
    if (const auto* p = q("page_size"); p && (!parse_int(*p, size) || size < 1 || size > options_.max_page_size)) {
      return error(400, "bad_query", "page_size must be within 1.." + std::to_string(options_.max_page_size));
    }
    const auto& ids = it->second.compounds;
    json rows = json::array();
    const long total = static_cast<long>(ids.size());
    const long first = (page - 1) * size;
    if (first < total) {
      auto b = std::next(ids.begin(), first);
      for (long k = 0; k < size && b != ids.end(); ++k, ++b) rows.push_back(*b);
    }
    return json_response(
        {{"fragment", parts[1]}, {"page", page}, {"page_size", size}, {"total", total}, {"compounds", rows}});
  }

  return error(404, "not_found", "no such endpoint");
}

std::string percent_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto res = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (res.ec == std::errc() && res.ptr == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

}  // namespace precut::server
