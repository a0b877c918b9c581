// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "precut/classes.hpp"
#include "precut/ingest.hpp"
#include "precut/mmp.hpp"
#include "precut/netbuild.hpp"
#include "precut/pipeline.hpp"
#include "precut/server.hpp"
#include "precut/tiler.hpp"
#include "support.hpp"

using namespace precut;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Pinned limits.
constexpr double kMmpSeconds = 60.0;
constexpr double kDemoSeconds = 120.0;
constexpr int kCensusMolecules = 50;
constexpr int kCanonMolecules = 100;
constexpr int kPermutations = 10;
constexpr int kRandomPairs = 10000;
constexpr int kNearQueries = 1000;
constexpr int kCropSamples = 40;
constexpr std::uint64_t kSeed = 20240601;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

long choose(long n, long k) {
  long r = 1;
  for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::set<std::pair<std::string, std::string>> pair_set(const std::vector<mmp::MmpRecord>& m) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& r : m) out.emplace(r.compound_a, r.compound_b);
  return out;
}

// Shared by several criteria: the acceptance corpus and its "all" network.
struct Fixture {
  std::vector<ingest::CompoundRecord> compounds = testing::load_corpus("acceptance");
  std::vector<mmp::CorpusEntry> corpus = testing::corpus_from(compounds);
  std::vector<mmp::MmpRecord> mmps;
  net::NetworkGraph graph;

  const net::NetworkGraph& network() {
    if (graph.node_count() == 0) {
      if (mmps.empty()) mmps = mmp::find_mmps(corpus);
      std::vector<net::PairRecord> pairs;
      for (const auto& m : mmps) pairs.push_back({net::NodeKind::Compound, m.compound_a, net::NodeKind::Compound, m.compound_b});
      std::vector<net::Node> nodes;
      for (const auto& c : compounds) nodes.push_back({c.compound_id, net::NodeKind::Compound});
      graph = net::build_graph(pairs, nodes);
    }
    return graph;
  }
};

Outcome mmp_oracle(Fixture& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f.mmps = mmp::find_mmps(f.corpus);
  const double t_index = seconds_since(t0);
  const auto t1 = std::chrono::steady_clock::now();
  const auto oracle = testing::mmp_pairs_by_intersection(f.corpus, mmp::kDefaultMaxValueHeavy);
  const double t_oracle = seconds_since(t1);
  const auto got = pair_set(f.mmps);
  const bool pass = f.corpus.size() == 200 && got == oracle && t_index < kMmpSeconds;
  return {pass, fmt("%zu compounds, %zu pairs (oracle %zu), index %.2fs, oracle %.2fs, limit %.0fs", f.corpus.size(),
                    got.size(), oracle.size(), t_index, t_oracle, kMmpSeconds)};
}

Outcome cut_census() {
  std::mt19937_64 rng(kSeed);
  int ok = 0, max_b = 0;
  for (int i = 0; i < kCensusMolecules; ++i) {
    const auto g = chem::parse_smiles(testing::random_smiles(rng, 2 + i % 14));
    const int b = testing::cuttable_bond_count(g);
    const auto bonds = mmp::enumerate_cut_bonds(g);
    long counts[4] = {0, 0, 0, 0};
    for (const auto& s : mmp::enumerate_cut_sets(bonds)) {
      mmp::CutSet cs(g, s);
      ++counts[cs.size()];
    }
    max_b = std::max(max_b, b);
    ok += int(bonds.size()) == b && counts[1] == b && counts[2] == choose(b, 2) && counts[3] == choose(b, 3);
  }
  return {ok == kCensusMolecules, fmt("%d/%d molecules exact, B up to %d", ok, kCensusMolecules, max_b)};
}

Outcome value_gate(Fixture& f) {
  const auto i10 = mmp::index_corpus(f.corpus, 10);
  const auto i12 = mmp::index_corpus(f.corpus, 12);
  int worst = 0;
  for (const auto& r : i10) worst = std::max(worst, chem::parse_smiles(r.value).heavy_atom_count());
  const std::set<mmp::FragmentRecord> big(i12.begin(), i12.end());
  const bool index_superset = std::all_of(i10.begin(), i10.end(), [&](const auto& r) { return big.count(r); });
  const auto p10 = pair_set(mmp::pairs_from_index(i10));
  const auto p12 = pair_set(mmp::pairs_from_index(i12));
  const bool pair_superset = std::includes(p12.begin(), p12.end(), p10.begin(), p10.end());
  return {worst <= 10 && index_superset && pair_superset && i12.size() > i10.size(),
          fmt("largest value %d heavy atoms; records %zu -> %zu, pairs %zu -> %zu at 12", worst, i10.size(),
              i12.size(), p10.size(), p12.size())};
}

Outcome canonicalization(Fixture& f) {
  // The corpus repeats some structures under different ids, so pick 100
  // pairwise non-isomorphic molecules by the isomorphism oracle.
  std::vector<const chem::MolecularGraph*> picked;
  for (const auto& e : f.corpus) {
    if (int(picked.size()) == kCanonMolecules) break;
    const bool seen = std::any_of(picked.begin(), picked.end(), [&](const auto* g) { return testing::isomorphic(*g, e.graph); });
    if (!seen) picked.push_back(&e.graph);
  }
  std::mt19937_64 rng(kSeed);
  std::set<std::string> all;
  int stable = 0;
  for (const auto* g : picked) {
    std::set<std::string> mine;
    for (int k = 0; k < kPermutations; ++k) mine.insert(chem::write_canonical(testing::permuted(*g, rng)));
    stable += mine.size() == 1;
    all.insert(mine.begin(), mine.end());
  }
  return {int(picked.size()) == kCanonMolecules && int(all.size()) == kCanonMolecules && stable == kCanonMolecules,
          fmt("%zu molecules x %d permutations -> %zu strings, %d stable", picked.size(), kPermutations, all.size(),
              stable)};
}

Outcome layout_laws(Fixture& f) {
  const auto& g = f.network();
  const net::LayoutParams params;
  const auto a = net::layout_network(g, params, kSeed);
  const auto b = net::layout_network(g, params, kSeed);
  std::ostringstream la, ma, lb, mb;
  net::write_layout(la, g, a);
  net::write_mst(ma, g, a);
  net::write_layout(lb, g, b);
  net::write_mst(mb, g, b);
  const bool same = la.str() == lb.str() && ma.str() == mb.str();

  const auto comps = net::connected_components(g);
  std::vector<int> mst_per(comps.size(), 0);
  for (const auto& e : a.mst_edges) ++mst_per[a.component_of[e.a]];
  bool census = true;
  for (std::size_t c = 0; c < comps.size(); ++c) census &= mst_per[c] == int(comps[c].size()) - 1;

  int overlaps = 0;
  for (std::size_t i = 0; i < a.components.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      const auto &p = a.components[i], &q = a.components[j];
      overlaps += std::hypot(p.x - q.x, p.y - q.y) < p.r + q.r;
    }

  double mst_len = 0;
  for (const auto& e : a.mst_edges) mst_len += std::hypot(a.coords[e.a].x - a.coords[e.b].x, a.coords[e.a].y - a.coords[e.b].y);
  mst_len /= double(a.mst_edges.size());
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> pick(0, g.node_count() - 1);
  double rand_len = 0;
  for (int k = 0; k < kRandomPairs; ++k) {
    int i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    rand_len += std::hypot(a.coords[i].x - a.coords[j].x, a.coords[i].y - a.coords[j].y);
  }
  rand_len /= kRandomPairs;

  bool inside = true;
  for (const auto& v : a.coords) inside &= v.x >= 0 && v.x <= 1 && v.y >= 0 && v.y <= 1;

  return {same && census && overlaps == 0 && mst_len < rand_len && inside,
          fmt("%d nodes, %zu components; identical=%d, mst census=%d, overlaps=%d, mean mst %.4f < random %.4f",
              g.node_count(), comps.size(), int(same), int(census), overlaps, mst_len, rand_len)};
}

Outcome tile_laws(Fixture& f) {
  const auto& g = f.network();
  const auto layout = net::layout_network(g, {}, kSeed);
  tiler::Scene scene{layout.coords, layout.mst_edges, {}};
  std::map<std::string, ColorClass> color;
  for (const auto& c : f.compounds) color[c.compound_id] = c.color_class;
  for (const auto& n : g.nodes()) scene.classes.push_back(color.at(n.id));
  const tiler::RenderStyle style;

  testing::TempDir a("acc_tiles"), b("acc_tiles"), c("acc_tiles");
  tiler::generate_pyramid(scene, style, a.path(), "all", 2, kSeed);
  long files = 0;
  for (const auto& e : fs::recursive_directory_iterator(a.path())) files += e.path().extension() == ".png";

  tiler::generate_pyramid(scene, style, b.path(), "all", 3, kSeed);
  tiler::generate_pyramid(scene, style, c.path(), "all", 3, kSeed);
  std::mt19937_64 rng(kSeed);
  int crops_ok = 0;
  std::vector<tiler::Image> levels;
  for (int z = 0; z <= 3; ++z) levels.push_back(tiler::render_level(scene, style, z));
  for (int k = 0; k < kCropSamples; ++k) {
    const int z = int(rng() % 4), n = 1 << z;
    const int x = int(rng() % n), y = int(rng() % n);
    const auto bytes = testing::slurp(b.path() / std::to_string(z) / std::to_string(x) / (std::to_string(y) + ".png"));
    const std::vector<std::uint8_t> v(bytes.begin(), bytes.end());
    crops_ok += tiler::decode_png(v) == levels[z].crop(256 * x, 256 * y, 256, 256);
  }
  int identical = 0, total = 0;
  for (const auto& e : fs::recursive_directory_iterator(b.path())) {
    if (!e.is_regular_file()) continue;
    ++total;
    identical += testing::slurp(e.path()) == testing::slurp(c.path() / fs::relative(e.path(), b.path()));
  }
  return {files == 21 && crops_ok == kCropSamples && identical == total,
          fmt("z_max=2 -> %ld tiles; %d/%d sampled crops identical; regeneration %d/%d files identical", files,
              crops_ok, kCropSamples, identical, total)};
}

Outcome ring_filter() {
  const char* chains[] = {"C", "CC", "CCC", "O", "N", "CO", "CN", "Cl", "F"};
  std::vector<mmp::CorpusEntry> corpus;
  for (int i = 0; i < 9; ++i) corpus.push_back({"cy" + std::to_string(i), chem::parse_smiles(std::string("C1CCCCC1") + chains[i])});
  const std::string frag = "*C1CCCCC1";
  auto count = [&](const std::vector<mmp::RingFragmentPair>& p) {
    return std::count_if(p.begin(), p.end(), [&](const auto& r) { return r.fragment == frag; });
  };
  const auto at10 = mmp::ring_fragment_pairs(corpus, 10);
  const auto at1 = mmp::ring_fragment_pairs(corpus, 1);
  // A tenth compound lifts it over the threshold.
  corpus.push_back({"cy9", chem::parse_smiles("C1CCCCC1Br")});
  const auto ten = mmp::ring_fragment_pairs(corpus, 10);
  return {count(at10) == 0 && count(at1) == 9 && count(ten) == 10,
          fmt("9 compounds: %ld pairs at min 10, %ld at min 1; 10 compounds: %ld at min 10", long(count(at10)),
              long(count(at1)), long(count(ten)))};
}

Outcome itc_coloring() {
  const auto fixture = testing::itc_fixture();
  std::vector<ingest::CompoundRecord> compounds;
  std::vector<ingest::ActivityRecord> acts;
  for (const auto& c : fixture) {
    ingest::CompoundRecord r;
    r.compound_id = c.compound_id;
    compounds.push_back(r);
    for (const auto& t : c.target_classes) acts.push_back({c.compound_id, "A", "T", t});
  }
  ingest::assign_itcs(compounds, acts);
  int ok = 0, single = 0, multiple = 0, other = 0;
  for (std::size_t i = 0; i < fixture.size(); ++i) {
    ok += compounds[i].color_class == fixture[i].expected;
    const auto e = fixture[i].expected;
    (e == ColorClass::Multiple ? multiple : e == ColorClass::Other ? other : single)++;
  }
  return {ok == 30 && fixture.size() == 30,
          fmt("%d/%zu correct (%d single, %d multiple, %d other)", ok, fixture.size(), single, multiple, other)};
}

Outcome server_contracts(Fixture& f) {
  testing::TempDir dir("acc_server");
  pipeline::Config cfg;
  cfg.store = dir / "store";
  cfg.compounds = testing::source_dir() / "data/acceptance/compounds.tsv";
  cfg.activities = testing::source_dir() / "data/acceptance/activities.tsv";
  cfg.z_max = 3;
  pipeline::run_all(cfg);
  const server::Api api(cfg.store);

  // Every tile of every network, byte for byte.
  int tiles = 0, tiles_ok = 0;
  for (const auto& name : pipeline::store_networks(store::Store::open(cfg.store, false))) {
    for (int z = 0; z <= cfg.z_max; ++z)
      for (int x = 0; x < (1 << z); ++x)
        for (int y = 0; y < (1 << z); ++y) {
          const auto rel = pipeline::tile_dir(name) + "/" + std::to_string(z) + "/" + std::to_string(x) + "/" +
                           std::to_string(y) + ".png";
          const auto r = api.get("/" + rel);
          ++tiles;
          tiles_ok += r.status == 200 && r.body == testing::slurp(cfg.store / rel);
        }
  }

  // nodes/near against a linear scan over the served layout.
  const auto g = net::build_graph([&] {
    std::istringstream in(testing::slurp(cfg.store / "graphs/all/pairs.tsv"));
    return net::read_pairs(in);
  }(), [&] {
    std::istringstream in(testing::slurp(cfg.store / "graphs/all/nodes.tsv"));
    return net::read_nodes(in);
  }());
  std::istringstream li(testing::slurp(cfg.store / "layouts/all/layout.tsv"));
  std::istringstream mi(testing::slurp(cfg.store / "layouts/all/mst.tsv"));
  const auto layout = net::read_layout(li, mi, g);
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(0, 1);
  int near_ok = 0, near_hits = 0;
  for (int q = 0; q < kNearQueries; ++q) {
    double x = u(rng), y = u(rng);
    if (q % 2) {
      const auto& p = layout.coords[rng() % layout.coords.size()];
      x = std::clamp(p.x + 0.02 * (u(rng) - 0.5), 0.0, 1.0);
      y = std::clamp(p.y + 0.02 * (u(rng) - 0.5), 0.0, 1.0);
    }
    const int z = int(rng() % 7);
    const double r = 12.0 / std::ldexp(256.0, z);
    int best = -1;
    double best_d2 = 0;
    for (int i = 0; i < g.node_count(); ++i) {
      const double d2 = (layout.coords[i].x - x) * (layout.coords[i].x - x) + (layout.coords[i].y - y) * (layout.coords[i].y - y);
      if (d2 <= r * r && (best < 0 || d2 < best_d2)) {
        best = i;
        best_d2 = d2;
      }
    }
    const auto j = json::parse(api.get("/networks/all/nodes/near", {{"x", fmt("%.17g", x)}, {"y", fmt("%.17g", y)},
                                                                     {"z", std::to_string(z)}}).body);
    if (best < 0) {
      near_ok += j["node"].is_null();
    } else {
      ++near_hits;
      near_ok += !j["node"].is_null() && j["node"]["id"] == g.node(best).id;
    }
  }

  // MMP partner symmetry.
  std::map<std::string, std::set<std::string>> partners;
  for (const auto& c : f.compounds) {
    const auto j = json::parse(api.get("/compounds/" + c.compound_id + "/mmps").body);
    for (const auto& p : j["partners"]) partners[c.compound_id].insert(p["partner"].get<std::string>());
  }
  long links = 0, asym = 0;
  for (const auto& [a, bs] : partners)
    for (const auto& b : bs) {
      ++links;
      asym += !partners[b].count(a);
    }

  // Pagination conservation over every fragment shared by two or more compounds.
  std::istringstream fi(testing::slurp(cfg.store / "mmp/fragments.tsv"));
  std::map<std::string, std::set<std::string>> members;
  for (const auto& r : mmp::read_fragment_index(fi)) {
    members[r.key].insert(r.compound_id);
    members[r.value].insert(r.compound_id);
  }
  int frags = 0, frags_ok = 0;
  for (const auto& [text, ids] : members) {
    if (ids.size() < 2) continue;
    ++frags;
    std::vector<std::string> seen;
    bool totals = true;
    for (int page = 1;; ++page) {
      const auto j = json::parse(
          api.get("/fragments/" + text + "/compounds", {{"page", std::to_string(page)}, {"page_size", "7"}}).body);
      totals &= j["total"] == ids.size();
      if (j["compounds"].empty()) break;
      for (const auto& c : j["compounds"]) seen.push_back(c);
    }
    frags_ok += totals && seen.size() == ids.size() && std::set<std::string>(seen.begin(), seen.end()) == ids;
  }

  return {tiles_ok == tiles && near_ok == kNearQueries && asym == 0 && links > 0 && frags_ok == frags && frags > 0,
          fmt("tiles %d/%d; near %d/%d (%d hits); mmp links %ld, asymmetric %ld; pagination %d/%d fragments",
              tiles_ok, tiles, near_ok, kNearQueries, near_hits, links, asym, frags_ok, frags)};
}

Outcome end_to_end() {
  testing::TempDir dir("acc_demo");
  const auto store = dir / "store";
  const auto data = testing::source_dir() / "data/demo";
  const std::string cmd = std::string(PRECUT_CLI) + " run --store " + store.string() + " --compounds " +
                          (data / "compounds.tsv").string() + " --activities " + (data / "activities.tsv").string() +
                          " --log-level warn";
  const auto t0 = std::chrono::steady_clock::now();
  const int status = std::system(cmd.c_str());
  const double secs = seconds_since(t0);
  if (status != 0) return {false, fmt("precut run exited with status %d", status)};

  const server::Api api(store);
  server::BackgroundServer srv(api, "127.0.0.1", 0);
  httplib::Client cli("127.0.0.1", srv.port());
  const std::vector<std::string> want{"all", "center", "gpcr", "kinase", "ring"};
  auto r = cli.Get("/networks");
  if (!r || r->status != 200) return {false, "GET /networks failed"};
  std::set<std::string> served;
  int zmax = -1;
  for (const auto& n : json::parse(r->body)) {
    served.insert(n["name"].get<std::string>());
    zmax = n["z_max"];
  }
  int ok = 0;
  for (const auto& name : want) {
    auto t = cli.Get("/tiles/" + name + "/0/0/0.png");
    auto deep = cli.Get("/tiles/" + name + "/6/31/31.png");
    ok += served.count(name) && t && t->status == 200 &&
          t->body == testing::slurp(store / pipeline::tile_dir(name) / "0/0/0.png") && deep && deep->status == 200;
  }
  return {ok == int(want.size()) && secs < kDemoSeconds && zmax == 6,
          fmt("%.1fs (limit %.0fs), z_max %d, %d/%zu variants served over HTTP", secs, kDemoSeconds, zmax, ok,
              want.size())};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const auto t0 = std::chrono::steady_clock::now();
  Fixture f;
  report("mmp_oracle_equivalence", [&] { return mmp_oracle(f); });
  report("cut_census", [] { return cut_census(); });
  report("value_size_gate", [&] { return value_gate(f); });
  report("canonicalization", [&] { return canonicalization(f); });
  report("layout_determinism", [&] { return layout_laws(f); });
  report("tile_laws", [&] { return tile_laws(f); });
  report("ring_filter", [] { return ring_filter(); });
  report("itc_coloring", [] { return itc_coloring(); });
  report("server_contracts", [&] { return server_contracts(f); });
  report("end_to_end_demo", [] { return end_to_end(); });
  std::printf("%s: %d failed, %.1fs\n", failures ? "FAILED" : "ALL PASSED", failures, seconds_since(t0));
  return failures ? 1 : 0;
}
