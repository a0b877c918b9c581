#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "precut/chem.hpp"

namespace precut::chem {
namespace {

// Dense rank of `keys` (equal keys share a rank, ranks start at 0).
template <typename Key>
int dense_rank(const std::vector<Key>& keys, std::vector<int>& ranks) {
  std::vector<int> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  ranks.assign(keys.size(), 0);
  int rank = -1;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || keys[order[i - 1]] < keys[order[i]]) ++rank;
    ranks[order[i]] = rank;
  }
  return rank + 1;
}

int bond_code(BondOrder o) { return static_cast<int>(o); }

// Repeats neighbourhood refinement until the class count stops growing.
int refine(const MolecularGraph& g, std::vector<int>& ranks, int classes) {
  const int n = g.atom_count();
  std::vector<std::pair<int, std::vector<int>>> sig(n);
  std::vector<int> next;
  while (classes < n) {
    for (int i = 0; i < n; ++i) {
      sig[i].first = ranks[i];
      auto& nb = sig[i].second;
      nb.clear();
      for (const auto& e : g.neighbors(i)) nb.push_back(ranks[e.atom] * 8 + bond_code(g.bond(e.bond).order));
      std::sort(nb.begin(), nb.end());
    }
    const int refined = dense_rank(sig, next);
    if (refined == classes) break;
    ranks.swap(next);
    classes = refined;
  }
  return classes;
}

}  // namespace

std::vector<int> canonical_ranks(const MolecularGraph& g, LabelMode mode) {
  const int n = g.atom_count();
  using Invariant = std::tuple<int, int, int, int, int, int>;
  std::vector<Invariant> initial(n);
  for (int i = 0; i < n; ++i) {
    const AtomNode& a = g.atom(i);
    initial[i] = {static_cast<int>(a.element), a.formal_charge, g.degree(i), a.aromatic ? 1 : 0,
                  a.hydrogens(), mode == LabelMode::Keep ? a.attachment_label : 0};
  }
  std::vector<int> ranks;
  int classes = dense_rank(initial, ranks);
  classes = refine(g, ranks, classes);

  // Break the lowest tied class at its first member, then refine again.
  std::vector<int> split_key(n);
  while (classes < n) {
    std::vector<int> count(classes, 0);
    for (int r : ranks) ++count[r];
    const int tied = static_cast<int>(std::find_if(count.begin(), count.end(), [](int c) { return c > 1; }) -
                                      count.begin());
    int chosen = -1;
    for (int i = 0; i < n; ++i) {
      if (ranks[i] == tied) {
        chosen = i;
        break;
      }
    }
    for (int i = 0; i < n; ++i) split_key[i] = ranks[i] * 2 + ((ranks[i] == tied && i != chosen) ? 1 : 0);
    classes = dense_rank(split_key, ranks);
    classes = refine(g, ranks, classes);
  }
  return ranks;
}

namespace {

bool organic_subset(const AtomNode& a) {
  switch (a.element) {
    case Element::B:
    case Element::C:
    case Element::N:
    case Element::O:
    case Element::P:
    case Element::S: return true;
    case Element::F:
    case Element::Cl:
    case Element::Br:
    case Element::I: return !a.aromatic;
    default: return false;
  }
}

std::string ring_digit(int d) {
  if (d < 10) return std::string(1, static_cast<char>('0' + d));
  return "%" + std::to_string(d);
}

class Writer {
 public:
  Writer(const MolecularGraph& g, std::span<const int> ranks, LabelMode mode, std::span<const int> labels)
      : g_(g), ranks_(ranks), mode_(mode), labels_(labels), ring_(perceive_rings(g)) {}

  WriteResult run() {
    const int n = g_.atom_count();
    visited_.assign(n, false);
    children_.assign(n, {});
    openings_.assign(n, {});
    closings_.assign(n, {});
    const auto comp = g_.component_ids();
    const int ncomp = g_.component_count();

    std::vector<int> start(ncomp, -1);
    for (int i = 0; i < n; ++i) {
      if (start[comp[i]] < 0 || ranks_[i] < ranks_[start[comp[i]]]) start[comp[i]] = i;
    }
    std::vector<std::pair<std::string, std::vector<int>>> pieces;
    for (int c = 0; c < ncomp; ++c) {
      plan(start[c]);
      out_.clear();
      order_.clear();
      next_digit_.clear();
      emit(start[c], -1);
      pieces.emplace_back(out_, order_);
    }
    std::sort(pieces.begin(), pieces.end());
    WriteResult result;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (i) result.text += '.';
      result.text += pieces[i].first;
      result.wildcard_order.insert(result.wildcard_order.end(), pieces[i].second.begin(), pieces[i].second.end());
    }
    return result;
  }

 private:
  std::vector<Neighbor> sorted_neighbors(int atom) const {
    std::vector<Neighbor> nb(g_.neighbors(atom).begin(), g_.neighbors(atom).end());
    std::sort(nb.begin(), nb.end(), [&](const Neighbor& a, const Neighbor& b) { return ranks_[a.atom] < ranks_[b.atom]; });
    return nb;
  }

  // DFS that fixes the spanning tree and ring-closure bonds.
  void plan(int root) {
    struct Frame {
      int atom;
      int parent_bond;
      std::vector<Neighbor> nb;
      std::size_t next;
    };
    std::vector<bool> bond_done(g_.bond_count(), false);
    std::vector<Frame> stack;
    visited_[root] = true;
    stack.push_back({root, -1, sorted_neighbors(root), 0});
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.next == f.nb.size()) {
        stack.pop_back();
        continue;
      }
      const Neighbor e = f.nb[f.next++];
      if (e.bond == f.parent_bond || bond_done[e.bond]) continue;
      bond_done[e.bond] = true;
      if (visited_[e.atom]) {
        // e.atom is an ancestor already written: it opens, f.atom closes.
        openings_[e.atom].push_back({f.atom, e.bond});
        closings_[f.atom].push_back({e.atom, e.bond});
        continue;
      }
      visited_[e.atom] = true;
      children_[f.atom].push_back({e.atom, e.bond});
      const int child = e.atom;
      stack.push_back({child, e.bond, sorted_neighbors(child), 0});
    }
    for (auto& v : openings_) {
      std::sort(v.begin(), v.end(), [&](const Neighbor& a, const Neighbor& b) { return ranks_[a.atom] < ranks_[b.atom]; });
    }
  }

  std::string bond_symbol(int bond) const {
    const BondEdge& b = g_.bond(bond);
    const bool both_aromatic = g_.atom(b.a).aromatic && g_.atom(b.b).aromatic;
    switch (b.order) {
      case BondOrder::Single: return both_aromatic ? "-" : "";
      case BondOrder::Double: return "=";
      case BondOrder::Triple: return "#";
      case BondOrder::Aromatic: return both_aromatic && ring_[bond] ? "" : ":";
    }
    return "";
  }

  std::string atom_symbol(int i) {
    const AtomNode& a = g_.atom(i);
    if (a.is_wildcard()) {
      order_.push_back(i);
      const int label = mode_ == LabelMode::Ignore ? 0 : (labels_.empty() ? a.attachment_label : labels_[i]);
      return label ? "[*:" + std::to_string(label) + "]" : "*";
    }
    std::string sym(element_symbol(a.element));
    if (a.aromatic) {
      for (auto& ch : sym) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    }
    const auto def = default_hydrogens(g_, i);
    if (organic_subset(a) && a.formal_charge == 0 && def && *def == a.hydrogens()) return sym;
    std::string s = "[" + sym;
    if (a.hydrogens() > 0) {
      s += 'H';
      if (a.hydrogens() > 1) s += std::to_string(a.hydrogens());
    }
    if (a.formal_charge != 0) {
      s += a.formal_charge > 0 ? '+' : '-';
      const int mag = std::abs(a.formal_charge);
      if (mag > 1) s += std::to_string(mag);
    }
    return s + "]";
  }

  int take_digit() {
    for (int d = 1;; ++d) {
      if (!in_use_.count(d)) {
        in_use_.insert(d);
        return d;
      }
    }
  }

  void emit(int root, int) {
    struct Frame {
      int atom;
      std::size_t next_child;
    };
    write_atom(root);
    std::vector<Frame> stack{{root, 0}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      const auto& kids = children_[f.atom];
      if (f.next_child == kids.size()) {
        stack.pop_back();
        if (!stack.empty()) {
          const Frame& parent = stack.back();
          // Close the branch if this was not the parent's last child.
          if (parent.next_child < children_[parent.atom].size()) out_ += ')';
        }
        continue;
      }
      const Neighbor kid = kids[f.next_child++];
      const bool last = f.next_child == kids.size();
      if (!last) out_ += '(';
      out_ += bond_symbol(kid.bond);
      write_atom(kid.atom);
      stack.push_back({kid.atom, 0});
    }
  }

  void write_atom(int atom) {
    out_ += atom_symbol(atom);
    // Closings release digits only after this atom's openings are assigned,
    // so no digit closes and reopens on the same atom.
    std::vector<int> released;
    for (const auto& c : closings_[atom]) {
      const int d = next_digit_.at(c.bond);
      out_ += ring_digit(d);
      released.push_back(d);
    }
    for (const auto& o : openings_[atom]) {
      const int d = take_digit();
      next_digit_[o.bond] = d;
      out_ += bond_symbol(o.bond);
      out_ += ring_digit(d);
    }
    for (int d : released) in_use_.erase(d);
  }

  const MolecularGraph& g_;
  std::span<const int> ranks_;
  LabelMode mode_;
  std::span<const int> labels_;
  std::vector<bool> ring_;
  std::vector<bool> visited_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> openings_;
  std::vector<std::vector<Neighbor>> closings_;
  std::map<int, int> next_digit_;
  std::set<int> in_use_;
  std::string out_;
  std::vector<int> order_;
};

}  // namespace

WriteResult write_smiles(const MolecularGraph& g, std::span<const int> ranks, LabelMode mode,
                         std::span<const int> label_override) {
  if (g.atom_count() == 0) return {};
  return Writer(g, ranks, mode, label_override).run();
}

std::string write_canonical(const MolecularGraph& g, LabelMode mode) {
  const auto ranks = canonical_ranks(g, mode);
  return write_smiles(g, ranks, mode).text;
}

}  // namespace precut::chem
