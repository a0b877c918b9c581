#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "precut/mmp.hpp"

namespace precut::mmp {

using chem::MolecularGraph;

std::vector<std::string> ring_fragments(const MolecularGraph& g) {
  const auto cut_bonds = enumerate_cut_bonds(g);
  const int n = g.atom_count();
  // A fragment is fully determined by its atom set, and the same set recurs
  // under many cut sets.
  std::map<std::vector<int>, std::string> memo;
  std::set<std::string> found;
  std::vector<int> parent(n);
  std::vector<bool> is_cut(g.bond_count(), false);

  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  for (const auto& cuts : enumerate_cut_sets(cut_bonds)) {
    std::iota(parent.begin(), parent.end(), 0);
    for (int b : cuts) is_cut[b] = true;
    for (int i = 0; i < g.bond_count(); ++i) {
      if (!is_cut[i]) parent[find(g.bond(i).a)] = find(g.bond(i).b);
    }
    std::map<int, std::vector<int>> groups;
    for (int a = 0; a < n; ++a) groups[find(a)].push_back(a);
    for (auto& [root, atoms] : groups) {
      auto [it, inserted] = memo.try_emplace(atoms);
      if (inserted) {
        MolecularGraph frag = chem::induced_subgraph(g, atoms);
        if (frag.has_ring_bond()) {
          std::vector<int> local(n, -1);
          for (std::size_t i = 0; i < atoms.size(); ++i) local[atoms[i]] = static_cast<int>(i);
          for (int b : cuts) {
            const auto& bond = g.bond(b);
            const int inside = local[bond.a] >= 0 ? local[bond.a] : local[bond.b];
            if (inside < 0) continue;
            chem::AtomNode star;
            star.element = chem::Element::Wildcard;
            star.explicit_h = 0;
            frag.add_bond(inside, frag.add_atom(star), chem::BondOrder::Single);
          }
          it->second = chem::write_canonical(frag, chem::LabelMode::Ignore);
        }
      }
      if (!it->second.empty()) found.insert(it->second);
    }
    for (int b : cuts) is_cut[b] = false;
  }
  return {found.begin(), found.end()};
}

std::vector<RingFragmentPair> ring_fragment_pairs(std::span<const CorpusEntry> corpus, int min_compound_count,
                                                  Exec exec) {
  std::vector<std::vector<std::string>> per(corpus.size());
  const long n = static_cast<long>(corpus.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) per[i] = ring_fragments(corpus[i].graph);
  } else {
    for (long i = 0; i < n; ++i) per[i] = ring_fragments(corpus[i].graph);
  }
  std::map<std::string, std::set<std::string>> holders;
  for (long i = 0; i < n; ++i) {
    for (const auto& f : per[i]) holders[f].insert(corpus[i].compound_id);
  }
  std::vector<RingFragmentPair> out;
  for (const auto& [fragment, compounds] : holders) {
    if (static_cast<int>(compounds.size()) < min_compound_count) continue;
    for (const auto& c : compounds) out.push_back({fragment, c});
  }
  return out;
}

}  // namespace precut::mmp
