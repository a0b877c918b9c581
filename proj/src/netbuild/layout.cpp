#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>

#include "precut/error.hpp"
#include "precut/netbuild.hpp"
#include "precut/tsv.hpp"

namespace precut::net {

namespace {

double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(std::string("bad number in ") + what + ": '" + s + "'");
  }
  return v;
}

}  // namespace

std::uint64_t component_seed(std::uint64_t seed, int component_id) {
  return splitmix(seed ^ splitmix(static_cast<std::uint64_t>(component_id) + 1));
}

ComponentLayout layout_component(int component_id, std::span<const int> nodes, std::span<const Edge> mst,
                                 const LayoutParams& params, std::uint64_t seed, Exec exec) {
  const double L = params.rest_length;
  ComponentLayout out;
  out.component_id = component_id;
  out.nodes.assign(nodes.begin(), nodes.end());
  const int n = static_cast<int>(nodes.size());
  out.coords.assign(n, Vec2{});
  out.bounding_radius = 0.5 * L;
  if (n <= 1) return out;

  std::unordered_map<int, int> local;
  for (int i = 0; i < n; ++i) local.emplace(nodes[i], i);
  std::vector<std::vector<int>> adj(n);
  for (const auto& e : mst) {
    const int a = local.at(e.a), b = local.at(e.b);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  std::mt19937_64 rng(seed);
  const double disc = params.scatter * L * std::sqrt(static_cast<double>(n));
  for (auto& p : out.coords) {
    const double r = disc * std::sqrt(unit_double(rng));
    const double t = 2.0 * std::numbers::pi * unit_double(rng);
    p = {r * std::cos(t), r * std::sin(t)};
  }

  std::vector<Vec2> force(n);
  for (int it = 0; it < params.iterations; ++it) {
    accumulate_forces(out.coords, adj, params, force, exec);
    const double cap = params.max_displacement * L * (1.0 - static_cast<double>(it) / params.iterations);
    for (int i = 0; i < n; ++i) {
      double dx = params.step * force[i].x;
      double dy = params.step * force[i].y;
      const double len = std::sqrt(dx * dx + dy * dy);
      if (len > cap) {
        dx *= cap / len;
        dy *= cap / len;
      }
      out.coords[i].x += dx;
      out.coords[i].y += dy;
    }
  }

  Vec2 c;
  for (const auto& p : out.coords) {
    c.x += p.x;
    c.y += p.y;
  }
  c.x /= n;
  c.y /= n;
  double far = 0.0;
  for (auto& p : out.coords) {
    p.x -= c.x;
    p.y -= c.y;
    far = std::max(far, std::sqrt(p.x * p.x + p.y * p.y));
  }
  out.bounding_radius = far + 0.5 * L;
  return out;
}

LayoutResult layout_network(const NetworkGraph& g, const LayoutParams& params, std::uint64_t seed, Exec exec) {
  const auto comps = connected_components(g);
  const long m = static_cast<long>(comps.size());
  std::vector<ComponentLayout> layouts(comps.size());
  std::vector<std::vector<Edge>> trees(comps.size());
  auto one = [&](long c) {
    trees[c] = minimum_spanning_tree(g, comps[c]);
    layouts[c] = layout_component(static_cast<int>(c), comps[c], trees[c], params,
                                  component_seed(seed, static_cast<int>(c)), Exec::Serial);
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long c = 0; c < m; ++c) one(c);
  } else {
    for (long c = 0; c < m; ++c) one(c);
  }
  LayoutResult result = pack_components(g.node_count(), layouts);
  for (auto& t : trees) result.mst_edges.insert(result.mst_edges.end(), t.begin(), t.end());
  std::sort(result.mst_edges.begin(), result.mst_edges.end());
  result.seed = seed;
  return result;
}

void write_layout(std::ostream& out, const NetworkGraph& g, const LayoutResult& layout) {
  out << tsv_line({"node_id", "x", "y", "component_id"});
  for (int i = 0; i < g.node_count(); ++i) {
    out << tsv_line({g.node(i).id, format_double(layout.coords[i].x), format_double(layout.coords[i].y),
                     std::to_string(layout.component_of[i])});
  }
}

void write_mst(std::ostream& out, const NetworkGraph& g, const LayoutResult& layout) {
  out << tsv_line({"id_a", "id_b"});
  for (const auto& e : layout.mst_edges) out << tsv_line({g.node(e.a).id, g.node(e.b).id});
}

LayoutResult read_layout(std::istream& layout_in, std::istream& mst_in, const NetworkGraph& g) {
  LayoutResult r;
  r.coords.assign(g.node_count(), Vec2{});
  r.component_of.assign(g.node_count(), -1);
  const auto t = read_tsv(layout_in, "layout");
  const int id = t.require("node_id", "layout"), x = t.require("x", "layout"), y = t.require("y", "layout");
  const int comp = t.require("component_id", "layout");
  int max_comp = -1;
  for (const auto& row : t.rows) {
    const int i = g.index_of(row[id]);
    if (i < 0) throw Error("layout references unknown node '" + row[id] + "'");
    r.coords[i] = {parse_double(row[x], "layout"), parse_double(row[y], "layout")};
    r.component_of[i] = std::stoi(row[comp]);
    max_comp = std::max(max_comp, r.component_of[i]);
  }
  if (std::find(r.component_of.begin(), r.component_of.end(), -1) != r.component_of.end()) {
    throw Error("layout does not cover every node");
  }
  const auto m = read_tsv(mst_in, "mst");
  const int a = m.require("id_a", "mst"), b = m.require("id_b", "mst");
  for (const auto& row : m.rows) {
    int ia = g.index_of(row[a]), ib = g.index_of(row[b]);
    if (ia < 0 || ib < 0) throw Error("mst references unknown node");
    if (ia > ib) std::swap(ia, ib);
    r.mst_edges.push_back({ia, ib});
  }
  std::sort(r.mst_edges.begin(), r.mst_edges.end());
  // Circles are recomputed from coordinates, not stored.
  r.components.assign(max_comp + 1, Circle{});
  std::vector<int> count(max_comp + 1, 0);
  for (int i = 0; i < g.node_count(); ++i) {
    auto& c = r.components[r.component_of[i]];
    c.x += r.coords[i].x;
    c.y += r.coords[i].y;
    ++count[r.component_of[i]];
  }
  for (std::size_t c = 0; c < count.size(); ++c) {
    if (count[c]) {
      r.components[c].x /= count[c];
      r.components[c].y /= count[c];
    }
  }
  for (int i = 0; i < g.node_count(); ++i) {
    auto& c = r.components[r.component_of[i]];
    c.r = std::max(c.r, std::hypot(r.coords[i].x - c.x, r.coords[i].y - c.y));
  }
  return r;
}

}  // namespace precut::net
