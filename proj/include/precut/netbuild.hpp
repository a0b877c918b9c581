#pragma once

// Network construction and LGL-style layout: per-component force-directed
// placement using MST edges for attraction, then outward ring packing of the
// components into the unit square.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "precut/exec.hpp"

namespace precut::net {

enum class NodeKind { Compound, Fragment };

std::string_view kind_name(NodeKind kind);
NodeKind parse_kind(std::string_view text);

struct Node {
  std::string id;
  NodeKind kind = NodeKind::Compound;
};

struct PairRecord {
  NodeKind kind_a = NodeKind::Compound;
  std::string id_a;
  NodeKind kind_b = NodeKind::Compound;
  std::string id_b;
};

// Node indices, a < b.
struct Edge {
  int a = 0;
  int b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Nodes are kept sorted by id, so node index order is id order.
class NetworkGraph {
 public:
  NetworkGraph() = default;
  NetworkGraph(std::vector<Node> nodes, std::vector<Edge> edges);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[i]; }
  const std::vector<Edge>& edges() const { return edges_; }
  // -1 when absent.
  int index_of(std::string_view id) const;
  const std::vector<int>& neighbors(int node) const { return adjacency_[node]; }

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> adjacency_;
  std::unordered_map<std::string, int> index_;
};

// Deduplicates edges, drops self pairs. `extra_nodes` adds isolated nodes.
// Throws Error on empty ids or a node id used with two different kinds.
NetworkGraph build_graph(std::span<const PairRecord> pairs, std::span<const Node> extra_nodes = {});

// Each component is its sorted node list; components ordered by size
// descending, ties by smallest node index.
std::vector<std::vector<int>> connected_components(const NetworkGraph& g);

// Kruskal with unit weights over edges in (a, b) order. Throws Error when
// `component` is not connected.
std::vector<Edge> minimum_spanning_tree(const NetworkGraph& g, std::span<const int> component);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct LayoutParams {
  double rest_length = 1.0;       // L
  double cutoff = 4.0;            // repulsion radius R, in units of L
  int iterations = 300;           // T
  double attraction = 1.0;        // spring constant along MST edges
  double repulsion = 0.2;         // inverse-square strength, in L^3 units
  double step = 0.25;             // force-to-displacement factor
  double max_displacement = 1.0;  // initial per-iteration cap, in units of L
  double scatter = 1.0;           // initial disc radius = scatter * L * sqrt(n)
};

// Forces for one iteration. `mst_adjacency` uses local node indices.
// Serial and Parallel give bit-identical results: each node sums its own
// contributions in a fixed order.
void accumulate_forces(std::span<const Vec2> pos, std::span<const std::vector<int>> mst_adjacency,
                       const LayoutParams& params, std::span<Vec2> force, Exec exec);

struct ComponentLayout {
  int component_id = 0;
  std::vector<int> nodes;     // graph node indices
  std::vector<Vec2> coords;   // local frame, centroid at origin
  double bounding_radius = 0.0;
};

ComponentLayout layout_component(int component_id, std::span<const int> nodes, std::span<const Edge> mst,
                                 const LayoutParams& params, std::uint64_t seed, Exec exec = Exec::Serial);

struct Circle {
  double x = 0.0;
  double y = 0.0;
  double r = 0.0;
};

struct LayoutResult {
  std::vector<Vec2> coords;        // world [0,1]^2, by node index
  std::vector<int> component_of;   // by node index
  std::vector<Edge> mst_edges;     // all components, sorted
  std::vector<Circle> components;  // world bounding circles, by component id
  std::uint64_t seed = 0;
};

// Expects layouts sorted by node count descending (component id order).
LayoutResult pack_components(int node_count, std::span<const ComponentLayout> layouts);

LayoutResult layout_network(const NetworkGraph& g, const LayoutParams& params, std::uint64_t seed,
                            Exec exec = Exec::Parallel);

// Deterministic per-component seed.
std::uint64_t component_seed(std::uint64_t seed, int component_id);

// Layout records: node_id, x, y, component_id (header row, shortest
// round-trip number formatting).
void write_layout(std::ostream& out, const NetworkGraph& g, const LayoutResult& layout);
void write_mst(std::ostream& out, const NetworkGraph& g, const LayoutResult& layout);
// Reads a layout and MST back against `g`.
LayoutResult read_layout(std::istream& layout_in, std::istream& mst_in, const NetworkGraph& g);

// Pair list TSV: kind_a, id_a, kind_b, id_b.
void write_pairs(std::ostream& out, std::span<const PairRecord> pairs);
std::vector<PairRecord> read_pairs(std::istream& in);
// Node list TSV: node_id, kind.
void write_nodes(std::ostream& out, std::span<const Node> nodes);
std::vector<Node> read_nodes(std::istream& in);

}  // namespace precut::net
