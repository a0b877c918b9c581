#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "precut/error.hpp"
#include "precut/frameworks.hpp"
#include "precut/mmp.hpp"
#include "precut/pipeline.hpp"
#include "precut/tsv.hpp"

namespace precut::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string graph_dir(const std::string& network) { return "graphs/" + network; }
std::string layout_dir(const std::string& network) { return "layouts/" + network; }
std::string tile_dir(const std::string& network) { return "tiles/" + network; }

namespace {

constexpr const char* kCompounds = "corpus/compounds.tsv";
constexpr const char* kActivities = "corpus/activities.tsv";
constexpr const char* kSkipped = "corpus/skipped.tsv";
constexpr const char* kFragments = "mmp/fragments.tsv";
constexpr const char* kMmps = "mmp/mmps.tsv";
constexpr const char* kFrameworks = "frameworks";

// Order-sensitive fingerprint of everything a stage reads.
class Digest {
 public:
  Digest& add(std::string_view s) {
    crc_ = store::crc32_text(s, crc_);
    crc_ = store::crc32_text("\x1f", crc_);
    ++parts_;
    return *this;
  }
  Digest& add(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return add(ss.str());
  }
  Digest& add_file(const store::Store& s, const std::string& rel) { return add(rel).add(s.file(rel).crc32); }
  std::string str() const { return store::hex32(crc_) + "-" + std::to_string(parts_); }

 private:
  std::uint32_t crc_ = 0;
  int parts_ = 0;
};

void require(const store::Store& s, const std::string& stage, const std::string& needed) {
  if (!s.has_stage(needed)) {
    throw Error("stage '" + stage + "' requires stage '" + needed + "'; run `precut " + needed + "` first");
  }
}

bool up_to_date(const store::Store& s, const std::string& stage, const std::string& digest) {
  auto rec = s.stage(stage);
  if (rec && rec->digest == digest) {
    spdlog::info("{}: up to date", stage);
    return true;
  }
  return false;
}

std::ofstream create(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + p.string());
  return out;
}

std::istringstream input(const store::Store& s, const std::string& rel) { return std::istringstream(s.read_text(rel)); }

std::vector<ingest::CompoundRecord> load_corpus(const store::Store& s) {
  auto in = input(s, kCompounds);
  return ingest::read_compounds(in);
}

std::vector<mmp::CorpusEntry> entries(const std::vector<ingest::CompoundRecord>& compounds) {
  std::vector<mmp::CorpusEntry> out;
  out.reserve(compounds.size());
  for (const auto& c : compounds) out.push_back({c.compound_id, c.graph});
  return out;
}

std::map<std::string, ColorClass> compound_colors(const store::Store& s) {
  auto in = input(s, kCompounds);
  const auto t = read_tsv(in, "compound table");
  const int id = t.require("compound_id", "compound table"), color = t.require("color_class", "compound table");
  std::map<std::string, ColorClass> out;
  for (const auto& row : t.rows) out[row[id]] = parse_class(row[color]).value_or(ColorClass::Other);
  return out;
}

void write_graph(const fs::path& dir, std::span<const net::Node> nodes, std::span<const net::PairRecord> pairs) {
  auto n = create(dir / "nodes.tsv");
  net::write_nodes(n, nodes);
  auto p = create(dir / "pairs.tsv");
  net::write_pairs(p, pairs);
}

net::NetworkGraph read_graph(const store::Store& s, const std::string& network) {
  auto nodes_in = input(s, graph_dir(network) + "/nodes.tsv");
  auto pairs_in = input(s, graph_dir(network) + "/pairs.tsv");
  const auto nodes = net::read_nodes(nodes_in);
  const auto pairs = net::read_pairs(pairs_in);
  return net::build_graph(pairs, nodes);
}

std::vector<net::PairRecord> compound_pairs(std::span<const mmp::MmpRecord> mmps, const std::set<std::string>& keep) {
  std::vector<net::PairRecord> out;
  for (const auto& m : mmps) {
    if (keep.count(m.compound_a) && keep.count(m.compound_b)) {
      out.push_back({net::NodeKind::Compound, m.compound_a, net::NodeKind::Compound, m.compound_b});
    }
  }
  return out;
}

std::vector<net::Node> compound_nodes(const std::set<std::string>& ids) {
  std::vector<net::Node> out;
  for (const auto& id : ids) out.push_back({id, net::NodeKind::Compound});
  return out;
}

}  // namespace

std::vector<std::string> validate(const Config& cfg) {
  std::vector<std::string> errors;
  if (cfg.store.empty()) errors.push_back("store path is not set");
  if (cfg.max_value_heavy < 1) errors.push_back("max_value_heavy must be at least 1");
  if (cfg.ring_min_compounds < 1) errors.push_back("ring_min_compounds must be at least 1");
  if (cfg.z_max < 0 || cfg.z_max > 10) errors.push_back("z_max must be within 0..10");
  const auto& l = cfg.layout;
  if (!(l.rest_length > 0)) errors.push_back("layout rest_length must be positive");
  if (!(l.cutoff > 0)) errors.push_back("layout cutoff must be positive");
  if (l.iterations < 0) errors.push_back("layout iterations must not be negative");
  if (!(l.step > 0)) errors.push_back("layout step must be positive");
  if (!(l.repulsion >= 0) || !(l.attraction >= 0)) errors.push_back("layout force constants must not be negative");
  if (!(l.max_displacement > 0) || !(l.scatter > 0)) errors.push_back("layout displacement cap and scatter must be positive");
  const auto& r = cfg.rule_of_five;
  if (!(r.max_molecular_weight > 0) || r.max_hbd < 0 || r.max_hba < 0) errors.push_back("rule-of-5 limits must be positive");
  std::set<std::string> seen;
  for (const auto& n : cfg.networks) {
    if (!seen.insert(n).second) errors.push_back("network '" + n + "' listed twice");
    if (n == "all" || n == "center" || n == "ring") continue;
    if (n == kFrameworks) {
      errors.push_back("network name 'frameworks' is reserved for the frameworks stage");
      continue;
    }
    auto c = parse_class(n);
    if (!c || static_cast<int>(*c) >= kTargetClassCount) errors.push_back("unknown network variant '" + n + "'");
  }
  for (double v : cfg.style.node_radius_px) {
    if (!(v > 0)) errors.push_back("node radii must be positive");
  }
  for (double v : cfg.style.edge_width_px) {
    if (!(v > 0)) errors.push_back("edge widths must be positive");
  }
  return errors;
}

void check(const Config& cfg) {
  const auto errors = validate(cfg);
  if (errors.empty()) return;
  std::string msg = "invalid configuration:";
  for (const auto& e : errors) msg += "\n  - " + e;
  throw Error(msg);
}

Outcome run_ingest(const Config& cfg) {
  check(cfg);
  if (cfg.compounds.empty() || cfg.activities.empty()) throw Error("ingest needs both compounds and activities paths");
  auto s = store::Store::init(cfg.store);
  const auto& r = cfg.rule_of_five;
  const std::string digest = Digest()
                                 .add(store::hex32(store::crc32_file(cfg.compounds)))
                                 .add(store::hex32(store::crc32_file(cfg.activities)))
                                 .add(r.max_molecular_weight)
                                 .add(r.max_hbd)
                                 .add(r.max_hba)
                                 .add(r.max_logp)
                                 .str();
  if (up_to_date(s, "ingest", digest)) return Outcome::UpToDate;

  auto loaded = ingest::load_compounds(cfg.compounds);
  const auto activities = ingest::load_activities(cfg.activities);
  std::vector<ingest::CompoundRecord> kept;
  auto skipped = loaded.skipped;
  for (auto& c : loaded.compounds) {
    if (ingest::passes_rule_of_five(c, r)) {
      kept.push_back(std::move(c));
    } else {
      skipped.push_back({0, c.compound_id, "rule of 5"});
    }
  }
  ingest::assign_itcs(kept, activities);
  std::set<std::string> ids;
  for (const auto& c : kept) ids.insert(c.compound_id);
  std::vector<ingest::ActivityRecord> kept_activities;
  for (const auto& a : activities) {
    if (ids.count(a.compound_id)) kept_activities.push_back(a);
  }
  s.commit("ingest", digest, {"corpus"}, [&](const fs::path& root) {
    auto c = create(root / kCompounds);
    ingest::write_compounds(c, kept);
    auto a = create(root / kActivities);
    ingest::write_activities(a, kept_activities);
    auto k = create(root / kSkipped);
    k << tsv_line({"line", "compound_id", "reason"});
    for (const auto& row : skipped) k << tsv_line({std::to_string(row.line), row.compound_id, row.reason});
  });
  spdlog::info("ingest: {} compounds kept, {} skipped, {} activity rows", kept.size(), skipped.size(),
               kept_activities.size());
  return Outcome::Ran;
}

Outcome run_mmp(const Config& cfg) {
  check(cfg);
  auto s = store::Store::init(cfg.store);
  require(s, "mmp", "ingest");
  const std::string digest = Digest().add_file(s, kCompounds).add(cfg.max_value_heavy).str();
  if (up_to_date(s, "mmp", digest)) return Outcome::UpToDate;
  const auto corpus = entries(load_corpus(s));
  auto index = mmp::index_corpus(corpus, cfg.max_value_heavy);
  const auto mmps = mmp::pairs_from_index(index);
  s.commit("mmp", digest, {"mmp"}, [&](const fs::path& root) {
    auto f = create(root / kFragments);
    mmp::write_fragment_index(f, index);
    auto m = create(root / kMmps);
    mmp::write_mmps(m, mmps);
  });
  spdlog::info("mmp: {} fragment records, {} pairs", index.size(), mmps.size());
  return Outcome::Ran;
}

Outcome run_network(const Config& cfg) {
  check(cfg);
  auto s = store::Store::init(cfg.store);
  require(s, "network", "ingest");
  require(s, "network", "mmp");
  Digest d;
  d.add_file(s, kCompounds).add_file(s, kMmps).add(cfg.ring_min_compounds);
  for (const auto& n : cfg.networks) d.add(n);
  const std::string digest = d.str();
  if (up_to_date(s, "network", digest)) return Outcome::UpToDate;

  const auto compounds = load_corpus(s);
  auto mmp_in = input(s, kMmps);
  const auto mmps = mmp::read_mmps(mmp_in);
  std::set<std::string> all_ids;
  for (const auto& c : compounds) all_ids.insert(c.compound_id);

  struct Built {
    std::vector<net::Node> nodes;
    std::vector<net::PairRecord> pairs;
  };
  std::map<std::string, Built> built;
  for (const auto& name : cfg.networks) {
    Built b;
    if (name == "all" || name == "center") {
      b.pairs = compound_pairs(mmps, all_ids);
      b.nodes = compound_nodes(all_ids);
      if (name == "center") {
        const auto g = net::build_graph(b.pairs, b.nodes);
        const auto comps = net::connected_components(g);
        std::set<std::string> keep;
        if (!comps.empty()) {
          for (int i : comps.front()) keep.insert(g.node(i).id);
        }
        b.pairs = compound_pairs(mmps, keep);
        b.nodes = compound_nodes(keep);
      }
    } else if (name == "ring") {
      std::vector<ingest::CompoundRecord> single;
      for (const auto& c : compounds) {
        if (c.color_class != ColorClass::Multiple) single.push_back(c);
      }
      for (const auto& p : mmp::ring_fragment_pairs(entries(single), cfg.ring_min_compounds)) {
        b.pairs.push_back({net::NodeKind::Compound, p.compound_id, net::NodeKind::Fragment, p.fragment});
      }
    } else {
      const ColorClass cls = *parse_class(name);
      std::set<std::string> keep;
      for (const auto& c : compounds) {
        if (c.color_class == cls) keep.insert(c.compound_id);
      }
      b.pairs = compound_pairs(mmps, keep);
      b.nodes = compound_nodes(keep);
    }
    spdlog::info("network {}: {} nodes listed, {} pairs", name, b.nodes.size(), b.pairs.size());
    built.emplace(name, std::move(b));
  }
  std::vector<std::string> dirs;
  for (const auto& [name, b] : built) dirs.push_back(graph_dir(name));
  s.commit("network", digest, dirs, [&](const fs::path& root) {
    for (const auto& [name, b] : built) write_graph(root / graph_dir(name), b.nodes, b.pairs);
  });
  return Outcome::Ran;
}

Outcome run_frameworks(const Config& cfg) {
  check(cfg);
  auto s = store::Store::init(cfg.store);
  require(s, "frameworks", "ingest");
  const std::string digest = Digest().add_file(s, kCompounds).str();
  if (up_to_date(s, "frameworks", digest)) return Outcome::UpToDate;
  const auto h = fw::build_hierarchy(entries(load_corpus(s)));
  if (h.skipped) spdlog::warn("frameworks: {} compounds over the ring-system limit kept without hierarchy", h.skipped);
  const std::string dir = graph_dir(kFrameworks);
  s.commit("frameworks", digest, {dir}, [&](const fs::path& root) {
    write_graph(root / dir, {}, h.pairs);
    auto out = create(root / dir / "hierarchy.tsv");
    out << tsv_line({"child", "parent"});
    for (const auto& e : h.edges) out << tsv_line({e.child, e.parent});
  });
  spdlog::info("frameworks: {} pairs, {} hierarchy edges", h.pairs.size(), h.edges.size());
  return Outcome::Ran;
}

std::vector<std::string> store_networks(const store::Store& s) {
  std::vector<std::string> out;
  for (const auto& [rel, e] : s.files()) {
    constexpr std::string_view prefix = "graphs/", suffix = "/nodes.tsv";
    if (rel.size() > prefix.size() + suffix.size() && rel.starts_with(prefix) && rel.ends_with(suffix)) {
      const auto name = rel.substr(prefix.size(), rel.size() - prefix.size() - suffix.size());
      if (name.find('/') == std::string::npos) out.push_back(name);
    }
  }
  return out;
}

Outcome run_layout(const Config& cfg) {
  check(cfg);
  auto s = store::Store::init(cfg.store);
  const auto names = store_networks(s);
  if (names.empty()) throw Error("stage 'layout' requires stage 'network'; run `precut network` first");
  const auto& l = cfg.layout;
  Digest d;
  d.add(l.rest_length).add(l.cutoff).add(l.iterations).add(l.attraction).add(l.repulsion).add(l.step);
  d.add(l.max_displacement).add(l.scatter).add(std::to_string(cfg.seed));
  for (const auto& n : names) d.add_file(s, graph_dir(n) + "/nodes.tsv").add_file(s, graph_dir(n) + "/pairs.tsv");
  const std::string digest = d.str();
  if (up_to_date(s, "layout", digest)) return Outcome::UpToDate;

  std::vector<std::string> dirs;
  for (const auto& n : names) dirs.push_back(layout_dir(n));
  s.commit("layout", digest, dirs, [&](const fs::path& root) {
    for (const auto& n : names) {
      const auto t0 = std::chrono::steady_clock::now();
      const auto g = read_graph(s, n);
      const auto layout = net::layout_network(g, l, cfg.seed);
      auto lo = create(root / layout_dir(n) / "layout.tsv");
      net::write_layout(lo, g, layout);
      auto mo = create(root / layout_dir(n) / "mst.tsv");
      net::write_mst(mo, g, layout);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      spdlog::info("layout {}: {} nodes, {} components, {:.2f}s", n, g.node_count(), layout.components.size(), secs);
    }
  });
  return Outcome::Ran;
}

Outcome run_render(const Config& cfg) {
  check(cfg);
  auto s = store::Store::init(cfg.store);
  require(s, "render", "layout");
  require(s, "render", "ingest");
  const auto names = store_networks(s);
  Digest d;
  d.add_file(s, kCompounds).add(cfg.z_max).add(std::to_string(cfg.seed));
  for (double v : cfg.style.node_radius_px) d.add(v);
  for (double v : cfg.style.edge_width_px) d.add(v);
  for (const auto& c : cfg.style.palette) d.add(std::to_string(c.r) + "," + std::to_string(c.g) + "," + std::to_string(c.b));
  for (const auto& n : names) {
    if (!s.files().count(layout_dir(n) + "/layout.tsv")) {
      throw Error("stage 'render' requires a layout for network '" + n + "'; run `precut layout` first");
    }
    d.add_file(s, layout_dir(n) + "/layout.tsv").add_file(s, layout_dir(n) + "/mst.tsv");
  }
  const std::string digest = d.str();
  if (up_to_date(s, "render", digest)) return Outcome::UpToDate;

  const auto colors = compound_colors(s);
  std::vector<std::string> dirs;
  for (const auto& n : names) dirs.push_back(tile_dir(n));
  s.commit("render", digest, dirs, [&](const fs::path& root) {
    for (const auto& n : names) {
      const auto g = read_graph(s, n);
      auto li = input(s, layout_dir(n) + "/layout.tsv");
      auto mi = input(s, layout_dir(n) + "/mst.tsv");
      const auto layout = net::read_layout(li, mi, g);
      tiler::Scene scene{layout.coords, layout.mst_edges, {}};
      for (const auto& node : g.nodes()) {
        if (node.kind == net::NodeKind::Fragment) {
          scene.classes.push_back(ColorClass::RingFragment);
        } else {
          auto it = colors.find(node.id);
          scene.classes.push_back(it == colors.end() ? ColorClass::Other : it->second);
        }
      }
      const auto t0 = std::chrono::steady_clock::now();
      const auto m = tiler::generate_pyramid(scene, cfg.style, root / tile_dir(n), n, cfg.z_max, cfg.seed);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      spdlog::info("render {}: {} tiles, {:.2f}s", n, m.tile_count, secs);
    }
  });
  return Outcome::Ran;
}

void run_all(const Config& cfg, bool frameworks) {
  run_ingest(cfg);
  run_mmp(cfg);
  run_network(cfg);
  if (frameworks) run_frameworks(cfg);
  run_layout(cfg);
  run_render(cfg);
}

StoreStats stats(const fs::path& path) {
  const auto s = store::Store::open(path, false);
  StoreStats out;
  for (const auto& [name, rec] : s.stages()) out.stages.push_back(name);
  auto count_rows = [&](const std::string& rel) {
    if (!s.files().count(rel)) return 0;
    auto in = input(s, rel);
    return static_cast<int>(read_tsv(in, rel).rows.size());
  };
  out.compounds = count_rows(kCompounds);
  out.activities = count_rows(kActivities);
  out.fragment_records = count_rows(kFragments);
  out.mmps = count_rows(kMmps);
  for (const auto& n : store_networks(s)) {
    NetworkStats ns;
    ns.name = n;
    const auto g = read_graph(s, n);
    ns.nodes = g.node_count();
    ns.edges = g.edge_count();
    ns.components = static_cast<int>(net::connected_components(g).size());
    if (s.files().count(layout_dir(n) + "/mst.tsv")) ns.mst_edges = count_rows(layout_dir(n) + "/mst.tsv");
    if (s.files().count(tile_dir(n) + "/manifest.json")) {
      const auto m = tiler::read_manifest(s.path(tile_dir(n) + "/manifest.json"));
      ns.z_max = m.z_max;
      ns.tiles = m.tile_count;
    }
    out.networks.push_back(ns);
  }
  return out;
}

std::string stats_json(const StoreStats& s) {
  json nets = json::array();
  for (const auto& n : s.networks) {
    nets.push_back({{"name", n.name},
                    {"nodes", n.nodes},
                    {"edges", n.edges},
                    {"components", n.components},
                    {"mst_edges", n.mst_edges < 0 ? json(nullptr) : json(n.mst_edges)},
                    {"z_max", n.z_max < 0 ? json(nullptr) : json(n.z_max)},
                    {"tiles", n.tiles}});
  }
  const json j = {{"compounds", s.compounds}, {"activities", s.activities}, {"fragment_records", s.fragment_records},
                  {"mmps", s.mmps},           {"stages", s.stages},         {"networks", nets}};
  return j.dump(2) + "\n";
}

std::string stats_text(const StoreStats& s) {
  std::ostringstream out;
  out << "compounds " << s.compounds << ", activities " << s.activities << ", fragment records "
      << s.fragment_records << ", mmps " << s.mmps << "\n";
  for (const auto& n : s.networks) {
    out << n.name << ": " << n.nodes << " nodes, " << n.edges << " edges, " << n.components << " components";
    if (n.mst_edges >= 0) out << ", " << n.mst_edges << " mst edges";
    if (n.z_max >= 0) out << ", z_max " << n.z_max << ", " << n.tiles << " tiles";
    out << "\n";
  }
  return out.str();
}

}  // namespace precut::pipeline
