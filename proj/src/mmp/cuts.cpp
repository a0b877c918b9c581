#include <algorithm>
#include <set>

#include "precut/mmp.hpp"

namespace precut::mmp {

using chem::BondOrder;
using chem::MolecularGraph;

namespace {

bool cuttable(const MolecularGraph& g, int bond) {
  const auto& b = g.bond(bond);
  return b.order == BondOrder::Single && !b.in_ring && !g.atom(b.a).is_wildcard() && !g.atom(b.b).is_wildcard();
}

}  // namespace

std::vector<int> enumerate_cut_bonds(const MolecularGraph& g) {
  std::vector<int> out;
  for (int i = 0; i < g.bond_count(); ++i) {
    if (cuttable(g, i)) out.push_back(i);
  }
  std::sort(out.begin(), out.end(), [&](int x, int y) {
    const auto& bx = g.bond(x);
    const auto& by = g.bond(y);
    return std::pair(std::min(bx.a, bx.b), std::max(bx.a, bx.b)) < std::pair(std::min(by.a, by.b), std::max(by.a, by.b));
  });
  return out;
}

CutSet::CutSet(const MolecularGraph& g, std::vector<int> bonds) : bonds_(std::move(bonds)) {
  if (bonds_.empty() || bonds_.size() > 3) throw Error("cut set must hold 1 to 3 bonds");
  if (std::set<int>(bonds_.begin(), bonds_.end()).size() != bonds_.size()) throw Error("cut set repeats a bond");
  for (int b : bonds_) {
    if (b < 0 || b >= g.bond_count()) throw Error("cut bond index out of range");
    if (!cuttable(g, b)) throw Error("cut bond " + std::to_string(b) + " is not an acyclic single bond");
  }
}

std::vector<std::vector<int>> enumerate_cut_sets(std::span<const int> cut_bonds, int max_cuts) {
  std::vector<std::vector<int>> out;
  const int n = static_cast<int>(cut_bonds.size());
  for (int i = 0; i < n; ++i) {
    out.push_back({cut_bonds[i]});
  }
  if (max_cuts >= 2) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) out.push_back({cut_bonds[i], cut_bonds[j]});
  }
  if (max_cuts >= 3) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k) out.push_back({cut_bonds[i], cut_bonds[j], cut_bonds[k]});
  }
  return out;
}

std::vector<Fragment> fragment(const MolecularGraph& g, const CutSet& cuts) {
  MolecularGraph cut;
  for (const auto& a : g.atoms()) {
    chem::AtomNode copy = a;
    copy.explicit_h = a.hydrogens();
    cut.add_atom(copy);
  }
  std::vector<bool> removed(g.bond_count(), false);
  for (int b : cuts.bonds()) removed[b] = true;
  for (int i = 0; i < g.bond_count(); ++i) {
    if (!removed[i]) cut.add_bond(g.bond(i).a, g.bond(i).b, g.bond(i).order);
  }
  for (int i = 0; i < cuts.size(); ++i) {
    const auto& b = g.bond(cuts.bonds()[i]);
    chem::AtomNode star;
    star.element = chem::Element::Wildcard;
    star.attachment_label = i + 1;
    star.explicit_h = 0;
    cut.add_bond(b.a, cut.add_atom(star), BondOrder::Single);
    cut.add_bond(b.b, cut.add_atom(star), BondOrder::Single);
  }

  const auto comp = cut.component_ids();
  const int ncomp = cut.component_count();
  if (ncomp != g.component_count() + cuts.size()) throw Error("cut bond is not a bridge");
  std::vector<std::vector<int>> members(ncomp);
  for (int i = 0; i < cut.atom_count(); ++i) members[comp[i]].push_back(i);

  std::vector<Fragment> out;
  out.reserve(ncomp);
  for (const auto& atoms : members) {
    Fragment f;
    f.graph = chem::induced_subgraph(cut, atoms);
    f.graph.update_ring_flags();
    for (int a : atoms) {
      f.parent_atoms.push_back(a < g.atom_count() ? a : -1);
      if (cut.atom(a).is_wildcard() && a >= g.atom_count()) f.labels.push_back(cut.atom(a).attachment_label);
    }
    std::sort(f.labels.begin(), f.labels.end());
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace precut::mmp
