#include <algorithm>
#include <numeric>

#include "precut/chem.hpp"

namespace precut::chem {

int MolecularGraph::add_atom(const AtomNode& atom) {
  if (atom.attachment_label != 0 && !atom.is_wildcard()) {
    throw Error("attachment label on non-wildcard atom");
  }
  if (atom.aromatic && !aromatic_allowed(atom.element)) {
    throw Error("element " + std::string(element_symbol(atom.element)) + " cannot be aromatic");
  }
  atoms_.push_back(atom);
  adjacency_.emplace_back();
  return atom_count() - 1;
}

int MolecularGraph::add_bond(int a, int b, BondOrder order) {
  if (a < 0 || b < 0 || a >= atom_count() || b >= atom_count()) {
    throw Error("bond references atom out of range");
  }
  if (a == b) throw Error("bond from atom to itself");
  if (find_bond(a, b)) throw Error("parallel bond between atoms");
  bonds_.push_back(BondEdge{a, b, order, false});
  const int index = bond_count() - 1;
  adjacency_[a].push_back({b, index});
  adjacency_[b].push_back({a, index});
  return index;
}

std::optional<int> MolecularGraph::find_bond(int a, int b) const {
  if (a < 0 || a >= atom_count()) return std::nullopt;
  for (const auto& n : adjacency_[a]) {
    if (n.atom == b) return n.bond;
  }
  return std::nullopt;
}

void MolecularGraph::update_ring_flags() {
  const auto flags = perceive_rings(*this);
  for (int i = 0; i < bond_count(); ++i) bonds_[i].in_ring = flags[i];
}

std::vector<int> MolecularGraph::component_ids() const {
  std::vector<int> comp(atoms_.size(), -1);
  int next = 0;
  std::vector<int> stack;
  for (int start = 0; start < atom_count(); ++start) {
    if (comp[start] >= 0) continue;
    comp[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      for (const auto& n : adjacency_[u]) {
        if (comp[n.atom] < 0) {
          comp[n.atom] = next;
          stack.push_back(n.atom);
        }
      }
    }
    ++next;
  }
  return comp;
}

int MolecularGraph::component_count() const {
  const auto ids = component_ids();
  return ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
}

int MolecularGraph::heavy_atom_count() const {
  return static_cast<int>(std::count_if(atoms_.begin(), atoms_.end(),
                                        [](const AtomNode& a) { return !a.is_wildcard(); }));
}

bool MolecularGraph::has_ring_bond() const {
  return std::any_of(bonds_.begin(), bonds_.end(), [](const BondEdge& b) { return b.in_ring; });
}

void MolecularGraph::freeze_hydrogens() {
  for (auto& a : atoms_) a.explicit_h = a.hydrogens();
}

MolecularGraph induced_subgraph(const MolecularGraph& g, std::span<const int> keep) {
  std::vector<int> remap(g.atom_count(), -1);
  MolecularGraph out;
  for (int old : keep) {
    AtomNode a = g.atom(old);
    a.explicit_h = a.hydrogens();
    remap[old] = out.add_atom(a);
  }
  for (const auto& b : g.bonds()) {
    if (remap[b.a] >= 0 && remap[b.b] >= 0) {
      const int idx = out.add_bond(remap[b.a], remap[b.b], b.order);
      out.bond(idx).in_ring = b.in_ring;
    }
  }
  return out;
}

MolecularGraph largest_component(const MolecularGraph& g) {
  const auto comp = g.component_ids();
  const int count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
  if (count <= 1) return g;
  std::vector<int> heavy(count, 0);
  for (int i = 0; i < g.atom_count(); ++i) {
    if (!g.atom(i).is_wildcard()) ++heavy[comp[i]];
  }
  // Components are numbered by lowest atom index, so max_element keeps the
  // earliest on ties.
  const int best = static_cast<int>(std::max_element(heavy.begin(), heavy.end()) - heavy.begin());
  std::vector<int> keep;
  for (int i = 0; i < g.atom_count(); ++i) {
    if (comp[i] == best) keep.push_back(i);
  }
  MolecularGraph out = induced_subgraph(g, keep);
  // Restore the parse-time hydrogen representation for unbracketed atoms.
  for (int i = 0; i < out.atom_count(); ++i) out.atom(i).explicit_h = g.atom(keep[i]).explicit_h;
  return out;
}

std::optional<int> default_hydrogens(const MolecularGraph& g, int atom) {
  static constexpr int kB[] = {3}, kC[] = {4}, kN[] = {3, 5}, kO[] = {2}, kP[] = {3, 5}, kS[] = {2, 4, 6},
                       kHalogen[] = {1};
  const AtomNode& a = g.atom(atom);
  std::span<const int> valences;
  switch (a.element) {
    case Element::Wildcard: return 0;
    case Element::B: valences = kB; break;
    case Element::C: valences = kC; break;
    case Element::N: valences = kN; break;
    case Element::O: valences = kO; break;
    case Element::P: valences = kP; break;
    case Element::S:
    case Element::Se: valences = kS; break;
    case Element::F:
    case Element::Cl:
    case Element::Br:
    case Element::I: valences = kHalogen; break;
  }
  int sum = 0;
  for (const auto& n : g.neighbors(atom)) {
    const BondOrder order = g.bond(n.bond).order;
    sum += order == BondOrder::Aromatic ? 1 : static_cast<int>(order);
  }
  if (!a.aromatic) {
    for (int v : valences) {
      if (v >= sum) return v - sum;
    }
    return std::nullopt;
  }
  if (sum > valences.back()) return std::nullopt;
  switch (a.element) {
    // Chalcogens donate a lone pair to the ring and never carry H here.
    case Element::O:
    case Element::S:
    case Element::Se: return 0;
    default: return std::max(0, valences.front() - sum - 1);
  }
}

}  // namespace precut::chem
