#include <algorithm>
#include <array>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include "precut/mmp.hpp"
#include "precut/tsv.hpp"

namespace precut::mmp {

using chem::LabelMode;
using chem::MolecularGraph;

namespace {

// Copy of `g` with every '*' label replaced through `assign` (old -> new).
MolecularGraph relabel(const MolecularGraph& g, const std::array<int, 4>& assign) {
  MolecularGraph out = g;
  for (int i = 0; i < out.atom_count(); ++i) {
    auto& a = out.atom(i);
    if (a.is_wildcard() && a.attachment_label > 0) a.attachment_label = assign[a.attachment_label];
  }
  return out;
}

MolecularGraph disjoint_union(std::span<const Fragment* const> parts) {
  MolecularGraph out;
  for (const Fragment* f : parts) {
    const int base = out.atom_count();
    for (const auto& a : f->graph.atoms()) out.add_atom(a);
    for (const auto& b : f->graph.bonds()) out.add_bond(base + b.a, base + b.b, b.order);
  }
  return out;
}

}  // namespace

KeyValue canonical_key_value(std::span<const Fragment* const> key_parts, const Fragment& value) {
  struct Part {
    const Fragment* fragment;
    std::vector<int> ranks;
    chem::WriteResult plain;
  };
  std::vector<Part> parts;
  parts.reserve(key_parts.size());
  for (const Fragment* f : key_parts) {
    Part p{f, chem::canonical_ranks(f->graph, LabelMode::Ignore), {}};
    p.plain = chem::write_smiles(f->graph, p.ranks, LabelMode::Ignore);
    parts.push_back(std::move(p));
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const Part& a, const Part& b) { return a.plain.text < b.plain.text; });

  // First-appearance numbering over the key text.
  std::array<int, 4> reference{0, 0, 0, 0};
  int next = 0;
  for (const Part& p : parts) {
    for (int atom : p.plain.wildcard_order) {
      const int old = p.fragment->graph.atom(atom).attachment_label;
      if (old > 0 && reference[old] == 0) reference[old] = ++next;
    }
  }
  const int k = next;

  KeyValue kv;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const MolecularGraph& g = parts[i].fragment->graph;
    std::vector<int> labels(g.atom_count(), 0);
    for (int a = 0; a < g.atom_count(); ++a) labels[a] = reference[g.atom(a).attachment_label];
    if (i) kv.key += '.';
    kv.key += chem::write_smiles(g, parts[i].ranks, LabelMode::Keep, labels).text;
  }

  if (k <= 1) {
    kv.value = chem::write_canonical(relabel(value.graph, reference));
    return kv;
  }

  // Other numberings that are automorphic on the key give the same key text;
  // among them the smallest value text wins.
  std::vector<const Fragment*> ordered;
  for (const Part& p : parts) ordered.push_back(p.fragment);
  const MolecularGraph key_graph = disjoint_union(ordered);
  const std::string reference_form = chem::write_canonical(relabel(key_graph, reference));

  std::array<int, 3> perm{1, 2, 3};
  bool first = true;
  do {
    std::array<int, 4> assign{0, 0, 0, 0};
    for (int old = 1; old <= 3; ++old) {
      if (reference[old] > 0) assign[old] = perm[reference[old] - 1];
    }
    if (assign != reference && chem::write_canonical(relabel(key_graph, assign)) != reference_form) continue;
    std::string candidate = chem::write_canonical(relabel(value.graph, assign));
    if (first || candidate < kv.value) kv.value = std::move(candidate);
    first = false;
  } while (std::next_permutation(perm.begin(), perm.begin() + k));
  return kv;
}

std::vector<FragmentRecord> index_fragmentations(const MolecularGraph& g, const std::string& compound_id,
                                                 int max_value_heavy) {
  if (g.component_count() > 1) throw Error("fragment indexing needs a single-component molecule: " + compound_id);
  std::vector<FragmentRecord> out;
  std::set<std::pair<std::string, std::string>> seen;
  const auto cut_bonds = enumerate_cut_bonds(g);
  for (auto& bonds : enumerate_cut_sets(cut_bonds)) {
    const int k = static_cast<int>(bonds.size());
    const CutSet cuts(g, std::move(bonds));
    const auto frags = fragment(g, cuts);
    for (std::size_t v = 0; v < frags.size(); ++v) {
      const Fragment& value = frags[v];
      // Admissible only if every cut bond is incident to the value.
      if (static_cast<int>(value.labels.size()) != k) continue;
      const int heavy = value.graph.heavy_atom_count();
      if (heavy > max_value_heavy) continue;
      std::vector<const Fragment*> keys;
      for (std::size_t j = 0; j < frags.size(); ++j) {
        if (j != v) keys.push_back(&frags[j]);
      }
      auto kv = canonical_key_value(keys, value);
      FragmentRecord record{compound_id, std::move(kv.key), std::move(kv.value), heavy, k,
                            value.graph.has_ring_bond()};
      // Symmetric molecules produce the same record from equivalent cuts.
      if (seen.emplace(record.key, record.value).second) out.push_back(std::move(record));
    }
  }
  return out;
}

std::vector<FragmentRecord> index_corpus(std::span<const CorpusEntry> corpus, int max_value_heavy, Exec exec) {
  std::vector<std::vector<FragmentRecord>> per(corpus.size());
  const long n = static_cast<long>(corpus.size());
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
    for (long i = 0; i < n; ++i) per[i] = index_fragmentations(corpus[i].graph, corpus[i].compound_id, max_value_heavy);
  } else {
    for (long i = 0; i < n; ++i) per[i] = index_fragmentations(corpus[i].graph, corpus[i].compound_id, max_value_heavy);
  }
  std::vector<FragmentRecord> out;
  out.reserve(std::accumulate(per.begin(), per.end(), std::size_t{0},
                              [](std::size_t s, const auto& v) { return s + v.size(); }));
  for (auto& v : per) std::move(v.begin(), v.end(), std::back_inserter(out));
  return out;
}

void write_fragment_index(std::ostream& out, std::span<const FragmentRecord> records) {
  out << tsv_line({"compound_id", "key", "value", "cut_count"});
  for (const auto& r : records) out << tsv_line({r.compound_id, r.key, r.value, std::to_string(r.cut_count)});
}

std::vector<FragmentRecord> read_fragment_index(std::istream& in) {
  const auto table = read_tsv(in, "fragment index");
  const int id = table.require("compound_id", "fragment index");
  const int key = table.require("key", "fragment index");
  const int value = table.require("value", "fragment index");
  const int cuts = table.require("cut_count", "fragment index");
  std::vector<FragmentRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    const auto g = chem::parse_smiles(row[value]);
    out.push_back(FragmentRecord{row[id], row[key], row[value], g.heavy_atom_count(), std::stoi(row[cuts]),
                                 g.has_ring_bond()});
  }
  return out;
}

void write_mmps(std::ostream& out, std::span<const MmpRecord> records) {
  out << tsv_line({"compound_a", "compound_b", "key", "value_a", "value_b", "cut_count"});
  for (const auto& r : records) {
    out << tsv_line({r.compound_a, r.compound_b, r.key, r.value_a, r.value_b, std::to_string(r.cut_count)});
  }
}

std::vector<MmpRecord> read_mmps(std::istream& in) {
  const auto table = read_tsv(in, "mmp list");
  const int a = table.require("compound_a", "mmp list");
  const int b = table.require("compound_b", "mmp list");
  const int key = table.require("key", "mmp list");
  const int va = table.require("value_a", "mmp list");
  const int vb = table.require("value_b", "mmp list");
  const int cuts = table.require("cut_count", "mmp list");
  std::vector<MmpRecord> out;
  out.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    out.push_back(MmpRecord{row[a], row[b], row[key], row[va], row[vb], std::stoi(row[cuts])});
  }
  return out;
}

}  // namespace precut::mmp
