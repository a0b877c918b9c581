#pragma once

// Ring frameworks (ring systems plus the linkers between them) and the
// subframework hierarchy built from them.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "precut/chem.hpp"
#include "precut/exec.hpp"
#include "precut/mmp.hpp"
#include "precut/netbuild.hpp"

namespace precut::fw {

inline constexpr int kMaxRingSystems = 12;

struct Framework {
  std::vector<int> ring_systems;  // indices into the source framework's systems
  chem::MolecularGraph graph;
  std::string canonical;
};

// Repeatedly removes degree-1 atoms outside rings. Removed bonds become
// hydrogens on the surviving neighbour. Returns nullopt for acyclic input.
std::optional<Framework> extract_framework(const chem::MolecularGraph& g);

// Fused ring systems of a framework: atom sets of the ring-bond subgraph
// components, ordered by lowest atom index.
std::vector<std::vector<int>> ring_systems(const chem::MolecularGraph& g);

// Ring-system adjacency: two systems are linked when a path of non-system
// atoms (possibly empty) joins them.
std::vector<std::vector<int>> system_graph(const chem::MolecularGraph& g, std::span<const std::vector<int>> systems);

// Every connected induced subset of ring systems, re-pruned. Ordered by
// subset size, then by bitmask. Throws Error past kMaxRingSystems.
std::vector<Framework> enumerate_subframeworks(const Framework& f);

struct HierarchyEdge {
  std::string child;
  std::string parent;
  friend bool operator==(const HierarchyEdge&, const HierarchyEdge&) = default;
  friend auto operator<=>(const HierarchyEdge&, const HierarchyEdge&) = default;
};

struct Hierarchy {
  // Compound to its full framework, then framework to framework. Sorted.
  std::vector<net::PairRecord> pairs;
  std::vector<HierarchyEdge> edges;
  int skipped = 0;  // compounds over the ring-system limit
};

Hierarchy build_hierarchy(std::span<const mmp::CorpusEntry> corpus, Exec exec = Exec::Parallel);

}  // namespace precut::fw
