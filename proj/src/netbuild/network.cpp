#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include "precut/error.hpp"
#include "precut/netbuild.hpp"
#include "precut/tsv.hpp"

namespace precut::net {

std::string_view kind_name(NodeKind kind) { return kind == NodeKind::Compound ? "compound" : "fragment"; }

NodeKind parse_kind(std::string_view text) {
  if (text == "compound") return NodeKind::Compound;
  if (text == "fragment" || text == "framework") return NodeKind::Fragment;
  throw Error("unknown node kind '" + std::string(text) + "'");
}

NetworkGraph::NetworkGraph(std::vector<Node> nodes, std::vector<Edge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  adjacency_.resize(nodes_.size());
  for (int i = 0; i < node_count(); ++i) index_.emplace(nodes_[i].id, i);
  for (const auto& e : edges_) {
    adjacency_[e.a].push_back(e.b);
    adjacency_[e.b].push_back(e.a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

int NetworkGraph::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? -1 : it->second;
}

NetworkGraph build_graph(std::span<const PairRecord> pairs, std::span<const Node> extra_nodes) {
  std::map<std::string, NodeKind> kinds;
  auto add = [&](const std::string& id, NodeKind kind) {
    if (id.empty()) throw Error("malformed pair record: empty node id");
    auto [it, inserted] = kinds.emplace(id, kind);
    if (!inserted && it->second != kind) throw Error("malformed pair record: node '" + id + "' has two kinds");
  };
  for (const auto& n : extra_nodes) add(n.id, n.kind);
  for (const auto& p : pairs) {
    add(p.id_a, p.kind_a);
    add(p.id_b, p.kind_b);
  }
  std::vector<Node> nodes;
  nodes.reserve(kinds.size());
  std::unordered_map<std::string, int> index;
  for (const auto& [id, kind] : kinds) {
    index.emplace(id, static_cast<int>(nodes.size()));
    nodes.push_back({id, kind});
  }
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) {
    int a = index.at(p.id_a);
    int b = index.at(p.id_b);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.push_back({a, b});
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return NetworkGraph(std::move(nodes), std::move(edges));
}

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    // Smaller root wins so roots stay deterministic.
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace

std::vector<std::vector<int>> connected_components(const NetworkGraph& g) {
  DisjointSet ds(g.node_count());
  for (const auto& e : g.edges()) ds.unite(e.a, e.b);
  std::vector<std::vector<int>> by_root(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) by_root[ds.find(i)].push_back(i);
  std::vector<std::vector<int>> out;
  for (auto& c : by_root) {
    if (!c.empty()) out.push_back(std::move(c));
  }
  // Members are ascending, so front() is the smallest node index.
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

std::vector<Edge> minimum_spanning_tree(const NetworkGraph& g, std::span<const int> component) {
  std::vector<bool> member(g.node_count(), false);
  for (int n : component) member[n] = true;
  DisjointSet ds(g.node_count());
  std::vector<Edge> tree;
  // g.edges() is already sorted by (a, b), i.e. by (min id, max id).
  for (const auto& e : g.edges()) {
    if (!member[e.a] || !member[e.b]) continue;
    if (ds.unite(e.a, e.b)) tree.push_back(e);
  }
  if (!component.empty() && tree.size() + 1 != component.size()) {
    throw Error("minimum spanning tree requested for a disconnected node set");
  }
  return tree;
}

void write_pairs(std::ostream& out, std::span<const PairRecord> pairs) {
  out << tsv_line({"kind_a", "id_a", "kind_b", "id_b"});
  for (const auto& p : pairs) {
    out << tsv_line({std::string(kind_name(p.kind_a)), p.id_a, std::string(kind_name(p.kind_b)), p.id_b});
  }
}

std::vector<PairRecord> read_pairs(std::istream& in) {
  const auto t = read_tsv(in, "pair list");
  const int ka = t.require("kind_a", "pair list"), ia = t.require("id_a", "pair list");
  const int kb = t.require("kind_b", "pair list"), ib = t.require("id_b", "pair list");
  std::vector<PairRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    out.push_back({parse_kind(row[ka]), row[ia], parse_kind(row[kb]), row[ib]});
  }
  return out;
}

void write_nodes(std::ostream& out, std::span<const Node> nodes) {
  out << tsv_line({"node_id", "kind"});
  for (const auto& n : nodes) out << tsv_line({n.id, std::string(kind_name(n.kind))});
}

std::vector<Node> read_nodes(std::istream& in) {
  const auto t = read_tsv(in, "node list");
  const int id = t.require("node_id", "node list"), kind = t.require("kind", "node list");
  std::vector<Node> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back({row[id], parse_kind(row[kind])});
  return out;
}

}  // namespace precut::net
