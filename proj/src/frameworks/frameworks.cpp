#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "precut/error.hpp"
#include "precut/frameworks.hpp"

namespace precut::fw {

using chem::BondOrder;
using chem::MolecularGraph;

namespace {

bool ring_atom(const MolecularGraph& g, int a) {
  for (const auto& n : g.neighbors(a)) {
    if (g.bond(n.bond).in_ring) return true;
  }
  return false;
}

// Prunes degree <= 1 non-ring atoms among `alive` to a fixpoint.
MolecularGraph prune(const MolecularGraph& g, std::vector<bool> alive) {
  std::vector<int> degree(g.atom_count(), 0);
  std::vector<int> extra_h(g.atom_count(), 0);
  auto lose = [&](int atom, BondOrder order) {
    // Aromatic atoms take one hydrogen whatever the removed bond was.
    extra_h[atom] += g.atom(atom).aromatic ? 1 : (order == BondOrder::Aromatic ? 1 : static_cast<int>(order));
  };
  for (const auto& b : g.bonds()) {
    if (alive[b.a] && alive[b.b]) {
      ++degree[b.a];
      ++degree[b.b];
    } else if (alive[b.a] != alive[b.b]) {
      lose(alive[b.a] ? b.a : b.b, b.order);
    }
  }
  std::vector<int> queue;
  for (int a = 0; a < g.atom_count(); ++a) {
    if (alive[a] && degree[a] <= 1 && !ring_atom(g, a)) queue.push_back(a);
  }
  while (!queue.empty()) {
    const int a = queue.back();
    queue.pop_back();
    if (!alive[a]) continue;
    alive[a] = false;
    for (const auto& n : g.neighbors(a)) {
      if (!alive[n.atom]) continue;
      lose(n.atom, g.bond(n.bond).order);
      if (--degree[n.atom] <= 1 && !ring_atom(g, n.atom)) queue.push_back(n.atom);
    }
  }
  std::vector<int> keep;
  for (int a = 0; a < g.atom_count(); ++a) {
    if (alive[a]) keep.push_back(a);
  }
  MolecularGraph out = chem::induced_subgraph(g, keep);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    auto& atom = out.atom(static_cast<int>(i));
    atom.explicit_h = atom.hydrogens() + extra_h[keep[i]];
  }
  out.update_ring_flags();
  return out;
}

bool connected_mask(unsigned mask, std::span<const std::vector<int>> meta) {
  if (mask == 0) return false;
  const int start = std::countr_zero(mask);
  unsigned seen = 1u << start;
  std::vector<int> stack{start};
  while (!stack.empty()) {
    const int s = stack.back();
    stack.pop_back();
    for (int t : meta[s]) {
      if ((mask >> t & 1u) && !(seen >> t & 1u)) {
        seen |= 1u << t;
        stack.push_back(t);
      }
    }
  }
  return seen == mask;
}

}  // namespace

std::optional<Framework> extract_framework(const MolecularGraph& input) {
  MolecularGraph g = input;
  g.freeze_hydrogens();
  g.update_ring_flags();
  if (!g.has_ring_bond()) return std::nullopt;
  Framework f;
  f.graph = prune(g, std::vector<bool>(g.atom_count(), true));
  f.ring_systems.resize(ring_systems(f.graph).size());
  std::iota(f.ring_systems.begin(), f.ring_systems.end(), 0);
  f.canonical = chem::write_canonical(f.graph);
  return f;
}

std::vector<std::vector<int>> ring_systems(const MolecularGraph& g) {
  std::vector<int> parent(g.atom_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<bool> in_ring(g.atom_count(), false);
  for (const auto& b : g.bonds()) {
    if (!b.in_ring) continue;
    in_ring[b.a] = in_ring[b.b] = true;
    const int ra = find(b.a), rb = find(b.b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  std::map<int, std::vector<int>> groups;
  for (int a = 0; a < g.atom_count(); ++a) {
    if (in_ring[a]) groups[find(a)].push_back(a);
  }
  std::vector<std::vector<int>> out;
  for (auto& [root, atoms] : groups) out.push_back(std::move(atoms));
  return out;
}

std::vector<std::vector<int>> system_graph(const MolecularGraph& g, std::span<const std::vector<int>> systems) {
  std::vector<int> system_of(g.atom_count(), -1);
  for (std::size_t s = 0; s < systems.size(); ++s) {
    for (int a : systems[s]) system_of[a] = static_cast<int>(s);
  }
  std::vector<std::set<int>> adj(systems.size());
  auto link = [&](int s, int t) {
    if (s == t) return;
    adj[s].insert(t);
    adj[t].insert(s);
  };
  for (const auto& b : g.bonds()) {
    if (system_of[b.a] >= 0 && system_of[b.b] >= 0) link(system_of[b.a], system_of[b.b]);
  }
  // Each linker component joins every system it touches.
  std::vector<bool> seen(g.atom_count(), false);
  for (int start = 0; start < g.atom_count(); ++start) {
    if (system_of[start] >= 0 || seen[start]) continue;
    std::set<int> touched;
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      const int a = stack.back();
      stack.pop_back();
      for (const auto& n : g.neighbors(a)) {
        if (system_of[n.atom] >= 0) {
          touched.insert(system_of[n.atom]);
        } else if (!seen[n.atom]) {
          seen[n.atom] = true;
          stack.push_back(n.atom);
        }
      }
    }
    for (int s : touched)
      for (int t : touched) link(s, t);
  }
  std::vector<std::vector<int>> out;
  for (const auto& s : adj) out.emplace_back(s.begin(), s.end());
  return out;
}

std::vector<Framework> enumerate_subframeworks(const Framework& f) {
  const auto systems = ring_systems(f.graph);
  const int n = static_cast<int>(systems.size());
  if (n > kMaxRingSystems) {
    throw Error("framework has " + std::to_string(n) + " ring systems, limit is " + std::to_string(kMaxRingSystems));
  }
  const auto meta = system_graph(f.graph, systems);
  std::vector<unsigned> masks;
  for (unsigned m = 1; m < (1u << n); ++m) {
    if (connected_mask(m, meta)) masks.push_back(m);
  }
  std::stable_sort(masks.begin(), masks.end(),
                   [](unsigned a, unsigned b) { return std::popcount(a) < std::popcount(b); });
  std::vector<Framework> out;
  out.reserve(masks.size());
  for (unsigned m : masks) {
    std::vector<bool> alive(f.graph.atom_count(), true);
    Framework sub;
    for (int s = 0; s < n; ++s) {
      if (m >> s & 1u) {
        sub.ring_systems.push_back(s);
      } else {
        for (int a : systems[s]) alive[a] = false;
      }
    }
    sub.graph = prune(f.graph, std::move(alive));
    sub.canonical = chem::write_canonical(sub.graph);
    out.push_back(std::move(sub));
  }
  return out;
}

Hierarchy build_hierarchy(std::span<const mmp::CorpusEntry> corpus, Exec exec) {
  struct Local {
    std::optional<std::string> framework;
    std::vector<HierarchyEdge> edges;
    bool skipped = false;
  };
  const long count = static_cast<long>(corpus.size());
  std::vector<Local> local(count);
  auto one = [&](long i) {
    auto f = extract_framework(corpus[i].graph);
    if (!f) return;
    local[i].framework = f->canonical;
    if (static_cast<int>(f->ring_systems.size()) > kMaxRingSystems) {
      local[i].skipped = true;
      return;
    }
    const auto subs = enumerate_subframeworks(*f);
    std::map<std::vector<int>, const Framework*> by_set;
    for (const auto& s : subs) by_set[s.ring_systems] = &s;
    for (const auto& s : subs) {
      if (s.ring_systems.size() < 2) continue;
      for (std::size_t k = 0; k < s.ring_systems.size(); ++k) {
        auto child = s.ring_systems;
        child.erase(child.begin() + static_cast<std::ptrdiff_t>(k));
        auto it = by_set.find(child);
        // Absent means removing this system disconnects the rest.
        if (it != by_set.end()) local[i].edges.push_back({it->second->canonical, s.canonical});
      }
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < count; ++i) one(i);
  } else {
    for (long i = 0; i < count; ++i) one(i);
  }

  Hierarchy h;
  std::set<HierarchyEdge> edges;
  for (long i = 0; i < count; ++i) {
    if (local[i].framework) {
      h.pairs.push_back({net::NodeKind::Compound, corpus[i].compound_id, net::NodeKind::Fragment, *local[i].framework});
    }
    if (local[i].skipped) ++h.skipped;
    edges.insert(local[i].edges.begin(), local[i].edges.end());
  }
  std::sort(h.pairs.begin(), h.pairs.end(), [](const net::PairRecord& a, const net::PairRecord& b) {
    return std::tie(a.id_a, a.id_b) < std::tie(b.id_a, b.id_b);
  });
  h.edges.assign(edges.begin(), edges.end());
  for (const auto& e : h.edges) h.pairs.push_back({net::NodeKind::Fragment, e.child, net::NodeKind::Fragment, e.parent});
  return h;
}

}  // namespace precut::fw
