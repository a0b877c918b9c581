#pragma once

// Hussain-Rea style fragmentation: cut 1-3 acyclic single bonds, index the
// pieces as (key = constant context, value = variable part) and pair up
// compounds sharing a key with different values.

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "precut/chem.hpp"
#include "precut/exec.hpp"

namespace precut::mmp {

// Acyclic, non-aromatic single bonds between two heavy atoms, ordered by
// (min endpoint, max endpoint).
std::vector<int> enumerate_cut_bonds(const chem::MolecularGraph& g);

class CutSet {
 public:
  // Validates size 1..3, distinctness and that every bond is cuttable.
  CutSet(const chem::MolecularGraph& g, std::vector<int> bonds);
  const std::vector<int>& bonds() const { return bonds_; }
  int size() const { return static_cast<int>(bonds_.size()); }

 private:
  std::vector<int> bonds_;
};

// Every subset of size 1..3 of `cut_bonds`, in lexicographic index order.
std::vector<std::vector<int>> enumerate_cut_sets(std::span<const int> cut_bonds, int max_cuts = 3);

struct Fragment {
  chem::MolecularGraph graph;
  std::vector<int> parent_atoms;  // -1 for the added '*' atoms
  std::vector<int> labels;        // attachment labels carried, ascending
};

// Cutting k bridges yields k+1 fragments, ordered by lowest parent atom.
// Cut i (1-based, in CutSet order) leaves [*:i] on both sides.
std::vector<Fragment> fragment(const chem::MolecularGraph& g, const CutSet& cuts);

struct FragmentRecord {
  std::string compound_id;
  std::string key;
  std::string value;
  int value_heavy_atoms = 0;
  int cut_count = 0;
  bool value_has_ring = false;

  friend bool operator==(const FragmentRecord&, const FragmentRecord&) = default;
  friend auto operator<=>(const FragmentRecord&, const FragmentRecord&) = default;
};

struct KeyValue {
  std::string key;
  std::string value;
};

// Canonical key text (labels renumbered by first appearance) and the value
// relabelled consistently. Symmetric key positions are resolved by taking
// the smallest value text.
KeyValue canonical_key_value(std::span<const Fragment* const> key_parts, const Fragment& value);

constexpr int kDefaultMaxValueHeavy = 10;

std::vector<FragmentRecord> index_fragmentations(const chem::MolecularGraph& g, const std::string& compound_id,
                                                 int max_value_heavy = kDefaultMaxValueHeavy);

struct MmpRecord {
  std::string compound_a;
  std::string compound_b;
  std::string key;
  std::string value_a;
  std::string value_b;
  int cut_count = 0;

  friend bool operator==(const MmpRecord&, const MmpRecord&) = default;
  friend auto operator<=>(const MmpRecord&, const MmpRecord&) = default;
};

struct CorpusEntry {
  std::string compound_id;
  chem::MolecularGraph graph;
};

// Fragment index for a whole corpus, concatenated in corpus order.
std::vector<FragmentRecord> index_corpus(std::span<const CorpusEntry> corpus, int max_value_heavy,
                                         Exec exec = Exec::Parallel);

// Groups an index by key and emits one deduplicated record per compound pair,
// sorted by (compound_a, compound_b).
std::vector<MmpRecord> pairs_from_index(std::vector<FragmentRecord> index);

// Throws Error on duplicate compound ids.
std::vector<MmpRecord> find_mmps(std::span<const CorpusEntry> corpus, int max_value_heavy = kDefaultMaxValueHeavy,
                                 Exec exec = Exec::Parallel);

struct RingFragmentPair {
  std::string fragment;
  std::string compound_id;

  friend bool operator==(const RingFragmentPair&, const RingFragmentPair&) = default;
  friend auto operator<=>(const RingFragmentPair&, const RingFragmentPair&) = default;
};

// Distinct ring-bearing fragments (labels stripped) over all 1-3 cut sets.
std::vector<std::string> ring_fragments(const chem::MolecularGraph& g);

constexpr int kDefaultRingMinCompounds = 10;

// (fragment, compound) pairs for fragments present in at least
// `min_compound_count` distinct compounds, sorted by (fragment, compound).
std::vector<RingFragmentPair> ring_fragment_pairs(std::span<const CorpusEntry> corpus,
                                                  int min_compound_count = kDefaultRingMinCompounds,
                                                  Exec exec = Exec::Parallel);

// TSV with header row, tab-delimited, no quoting.
void write_fragment_index(std::ostream& out, std::span<const FragmentRecord> records);
std::vector<FragmentRecord> read_fragment_index(std::istream& in);
void write_mmps(std::ostream& out, std::span<const MmpRecord> records);
std::vector<MmpRecord> read_mmps(std::istream& in);

}  // namespace precut::mmp
