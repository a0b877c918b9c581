#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "precut/error.hpp"
#include "precut/netbuild.hpp"
#include "support.hpp"

using namespace precut;
using namespace precut::net;

namespace {

PairRecord cc(const std::string& a, const std::string& b) {
  return {NodeKind::Compound, a, NodeKind::Compound, b};
}

std::string id(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "n%05d", i);
  return buf;
}

// Random graph over n nodes with roughly m edges; every node listed.
NetworkGraph random_graph(int n, int m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<PairRecord> pairs;
  for (int k = 0; k < m; ++k) pairs.push_back(cc(id(pick(rng)), id(pick(rng))));
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back({id(i), NodeKind::Compound});
  return build_graph(pairs, nodes);
}

// Chain of `len` nodes with a common prefix, each connected to the next.
std::vector<PairRecord> chain(const std::string& prefix, int len) {
  std::vector<PairRecord> out;
  for (int i = 0; i + 1 < len; ++i) out.push_back(cc(prefix + id(i), prefix + id(i + 1)));
  return out;
}

bool spanning_tree(int n, std::span<const Edge> edges, std::span<const int> nodes) {
  if (int(edges.size()) != int(nodes.size()) - 1) return false;
  std::map<int, std::vector<int>> adj;
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::set<int> seen{nodes[0]};
  std::vector<int> stack{nodes[0]};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v]) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  (void)n;
  // n-1 edges reaching all n nodes means connected and acyclic.
  return seen == std::set<int>(nodes.begin(), nodes.end());
}

// Two-body rest distance of the force law: k_a (d - L) = k_r L^3 / d^2.
double two_body_equilibrium(const LayoutParams& p) {
  const double L = p.rest_length;
  double lo = 1e-6 * L, hi = p.cutoff * L;
  for (int i = 0; i < 200; ++i) {
    const double d = 0.5 * (lo + hi);
    const double net = p.attraction * (d - L) - p.repulsion * L * L * L / (d * d);
    (net > 0 ? hi : lo) = d;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("build_graph") {
  std::vector<PairRecord> p{cc("a", "b"), cc("b", "a"), cc("a", "b")};
  CHECK(build_graph(p).edge_count() == 1);
  p = {cc("a", "a")};
  const auto g = build_graph(p);
  CHECK(g.edge_count() == 0);

  p = {cc("b", "c"), cc("a", "b")};
  const auto h = build_graph(p);
  CHECK(h.node(0).id == "a");
  CHECK(h.index_of("c") == 2);
  CHECK(h.index_of("zz") == -1);
  for (const auto& e : h.edges()) CHECK(e.a < e.b);

  p = {cc("", "a")};
  CHECK_THROWS_AS(build_graph(p), Error);
  p = {cc("a", "b"), {NodeKind::Fragment, "a", NodeKind::Compound, "c"}};
  CHECK_THROWS_AS(build_graph(p), Error);

  const std::vector<Node> extra{{"z", NodeKind::Compound}};
  p = {cc("a", "b")};
  CHECK(build_graph(p, extra).node_count() == 3);
}

TEST_CASE("components: fixed cases") {
  std::vector<PairRecord> p{cc("a", "b"), cc("b", "c"), cc("a", "c"), cc("x", "y")};
  auto comps = connected_components(build_graph(p));
  REQUIRE(comps.size() == 2);
  CHECK(comps[0].size() == 3);
  CHECK(comps[1].size() == 2);
  CHECK(connected_components(NetworkGraph{}).empty());
}

TEST_CASE("components: match BFS oracle") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 30; ++t) {
    const int n = 1 + int(rng() % 1000);
    const auto g = random_graph(n, int(rng() % (n + 1)), rng);
    const auto comps = connected_components(g);
    const auto label = testing::bfs_labels(g);
    std::vector<int> seen(n, 0);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      CHECK(std::is_sorted(comps[c].begin(), comps[c].end()));
      for (int v : comps[c]) {
        CHECK(label[v] == label[comps[c][0]]);
        ++seen[v];
      }
      CHECK(long(std::count(label.begin(), label.end(), label[comps[c][0]])) == long(comps[c].size()));
      if (c > 0) {
        const auto &a = comps[c - 1], &b = comps[c];
        CHECK((a.size() > b.size() || (a.size() == b.size() && a[0] < b[0])));
      }
    }
    CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
  }
}

TEST_CASE("mst: fixed cases and random checker") {
  std::vector<PairRecord> p{cc("a", "b"), cc("a", "c"), cc("b", "c")};
  auto g = build_graph(p);
  const std::vector<int> all{0, 1, 2};
  CHECK(minimum_spanning_tree(g, all) == std::vector<Edge>{{0, 1}, {0, 2}});

  p = chain("", 6);
  g = build_graph(p);
  const std::vector<int> six{0, 1, 2, 3, 4, 5};
  CHECK(minimum_spanning_tree(g, six).size() == 5);

  p = {cc("a", "b"), cc("c", "d")};
  g = build_graph(p);
  const std::vector<int> four{0, 1, 2, 3};
  CHECK_THROWS_AS(minimum_spanning_tree(g, four), Error);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const auto r = random_graph(2 + int(rng() % 300), 600, rng);
    const std::set<Edge> edges(r.edges().begin(), r.edges().end());
    for (const auto& comp : connected_components(r)) {
      const auto mst = minimum_spanning_tree(r, comp);
      for (const auto& e : mst) CHECK(edges.count(e));
      CHECK(spanning_tree(r.node_count(), mst, comp));
    }
  }
}

TEST_CASE("forces: serial equals parallel") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-10, 10);
  const int n = 800;
  std::vector<Vec2> pos(n);
  for (auto& p : pos) p = {u(rng), u(rng)};
  pos[5] = pos[4];  // coincident pair
  std::vector<std::vector<int>> adj(n);
  for (int i = 1; i < n; ++i) {
    const int j = int(rng() % i);
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  LayoutParams params;
  std::vector<Vec2> fs(n), fp(n);
  accumulate_forces(pos, adj, params, fs, Exec::Serial);
  accumulate_forces(pos, adj, params, fp, Exec::Parallel);
  CHECK(fs == fp);
  for (const auto& f : fs) {
    CHECK(std::isfinite(f.x));
    CHECK(std::isfinite(f.y));
  }
}

TEST_CASE("forces: repulsion only inside the cutoff") {
  LayoutParams params;
  std::vector<std::vector<int>> adj(2);
  std::vector<Vec2> f(2);
  std::vector<Vec2> pos{{0, 0}, {params.cutoff * params.rest_length * 1.01, 0}};
  accumulate_forces(pos, adj, params, f, Exec::Serial);
  CHECK(f[0] == Vec2{});
  pos[1].x = 2.0;
  accumulate_forces(pos, adj, params, f, Exec::Serial);
  CHECK(f[0].x == doctest::Approx(-params.repulsion / 4.0));
  CHECK(f[1].x == doctest::Approx(params.repulsion / 4.0));
}

TEST_CASE("layout_component: single node and two-body equilibrium") {
  LayoutParams params;
  const std::vector<int> one{0};
  auto l = layout_component(0, one, {}, params, 1);
  CHECK(l.coords[0] == Vec2{});

  const double d_star = two_body_equilibrium(params);
  const std::vector<int> two{0, 1};
  const std::vector<Edge> mst{{0, 1}};
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    l = layout_component(0, two, mst, params, seed);
    const double d = std::hypot(l.coords[0].x - l.coords[1].x, l.coords[0].y - l.coords[1].y);
    CHECK(std::abs(d - params.rest_length) <= 0.2 * params.rest_length);
    CHECK(d == doctest::Approx(d_star).epsilon(0.01));
    CHECK(l.bounding_radius >= d / 2);
  }
}

TEST_CASE("layout_component: determinism and serial/parallel agreement") {
  std::vector<PairRecord> p = chain("", 300);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 200; ++k) p.push_back(cc(id(int(rng() % 300)), id(int(rng() % 300))));
  const auto g = build_graph(p);
  const auto comp = connected_components(g)[0];
  const auto mst = minimum_spanning_tree(g, comp);
  LayoutParams params;
  const auto a = layout_component(0, comp, mst, params, 42, Exec::Serial);
  const auto b = layout_component(0, comp, mst, params, 42, Exec::Serial);
  const auto c = layout_component(0, comp, mst, params, 42, Exec::Parallel);
  CHECK(a.coords == b.coords);
  CHECK(a.coords == c.coords);
  const auto d = layout_component(0, comp, mst, params, 43, Exec::Serial);
  CHECK(a.coords != d.coords);
  double cx = 0, cy = 0, far = 0;
  for (const auto& v : a.coords) {
    cx += v.x;
    cy += v.y;
    far = std::max(far, std::hypot(v.x, v.y));
  }
  CHECK(std::abs(cx / a.coords.size()) < 1e-9);
  CHECK(std::abs(cy / a.coords.size()) < 1e-9);
  CHECK(a.bounding_radius >= far);
}

TEST_CASE("pack: [100, 10, 10] puts the large component in the middle") {
  std::vector<PairRecord> p = chain("big", 100);
  for (auto& e : chain("s1", 10)) p.push_back(e);
  for (auto& e : chain("s2", 10)) p.push_back(e);
  const auto g = build_graph(p);
  const auto r = layout_network(g, {}, 7);
  REQUIRE(r.components.size() == 3);
  auto centroid_distance = [&](int comp) {
    double x = 0, y = 0;
    int n = 0;
    for (int i = 0; i < g.node_count(); ++i) {
      if (r.component_of[i] != comp) continue;
      x += r.coords[i].x;
      y += r.coords[i].y;
      ++n;
    }
    return std::hypot(x / n - 0.5, y / n - 0.5);
  };
  const int big = r.component_of[g.index_of("big" + id(0))];
  CHECK(big == 0);
  for (int c = 0; c < 3; ++c) {
    if (c != big) CHECK(centroid_distance(big) < centroid_distance(c));
  }
}

TEST_CASE("pack: many components stay disjoint and inside the margin") {
  std::mt19937_64 rng(11);
  std::vector<PairRecord> p;
  std::vector<Node> extra;
  for (int c = 0; c < 60; ++c) {
    const int len = c == 0 ? 80 : 1 + int(rng() % 25);
    for (auto& e : chain("c" + std::to_string(c) + "_", len)) p.push_back(e);
    if (len == 1) extra.push_back({"c" + std::to_string(c) + "_" + id(0), NodeKind::Compound});
  }
  const auto g = build_graph(p, extra);
  const auto r = layout_network(g, {}, 3);
  const auto comps = connected_components(g);
  REQUIRE(r.components.size() == comps.size());
  for (std::size_t i = 0; i < r.components.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const auto &a = r.components[i], &b = r.components[j];
      CHECK(std::hypot(a.x - b.x, a.y - b.y) >= a.r + b.r);
    }
  }
  for (const auto& v : r.coords) {
    CHECK(v.x >= 0.02 - 1e-12);
    CHECK(v.x <= 0.98 + 1e-12);
    CHECK(v.y >= 0.02 - 1e-12);
    CHECK(v.y <= 0.98 + 1e-12);
  }
  for (int i = 0; i < g.node_count(); ++i) {
    const auto& c = r.components[r.component_of[i]];
    CHECK(std::hypot(r.coords[i].x - c.x, r.coords[i].y - c.y) <= c.r * (1 + 1e-9));
  }
}

TEST_CASE("layout_network: census, locality, serialisation") {
  std::mt19937_64 rng(12);
  const auto g = random_graph(400, 450, rng);
  const auto r = layout_network(g, {}, 5);
  const auto comps = connected_components(g);
  std::size_t expect = 0;
  for (const auto& c : comps) expect += c.size() - 1;
  CHECK(r.mst_edges.size() == expect);
  CHECK(std::is_sorted(r.mst_edges.begin(), r.mst_edges.end()));
  const std::set<Edge> edges(g.edges().begin(), g.edges().end());
  for (const auto& e : r.mst_edges) {
    CHECK(edges.count(e));
    CHECK(r.component_of[e.a] == r.component_of[e.b]);
  }

  std::ostringstream l1, m1, l2, m2;
  write_layout(l1, g, r);
  write_mst(m1, g, r);
  const auto again = layout_network(g, {}, 5, Exec::Serial);
  write_layout(l2, g, again);
  write_mst(m2, g, again);
  CHECK(l1.str() == l2.str());
  CHECK(m1.str() == m2.str());

  std::istringstream li(l1.str()), mi(m1.str());
  const auto back = read_layout(li, mi, g);
  CHECK(back.coords == r.coords);
  CHECK(back.component_of == r.component_of);
  CHECK(back.mst_edges == r.mst_edges);
}

TEST_CASE("pairs and nodes TSV") {
  const std::vector<PairRecord> p{cc("a", "b"), {NodeKind::Fragment, "*C1CCCCC1", NodeKind::Compound, "a"}};
  std::stringstream ps;
  write_pairs(ps, p);
  const auto back = read_pairs(ps);
  REQUIRE(back.size() == 2);
  CHECK(back[1].kind_a == NodeKind::Fragment);
  CHECK(back[1].id_a == "*C1CCCCC1");
  const std::vector<Node> n{{"a", NodeKind::Compound}, {"f", NodeKind::Fragment}};
  std::stringstream ns;
  write_nodes(ns, n);
  const auto nb = read_nodes(ns);
  REQUIRE(nb.size() == 2);
  CHECK(nb[1].kind == NodeKind::Fragment);
  CHECK(parse_kind(kind_name(NodeKind::Fragment)) == NodeKind::Fragment);
  CHECK(component_seed(1, 0) != component_seed(1, 1));
}
