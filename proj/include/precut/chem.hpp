#pragma once

// Minimal molecular graph, SMILES-subset reader/writer, canonical ranking,
// ring perception and the few descriptors the corpus filter needs.
// Hydrogens are always implicit: graph atoms are heavy atoms (plus '*').

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "precut/error.hpp"

namespace precut::chem {

// Ordinal order matters: it is the first key of the canonical atom invariant,
// so wildcards sort first and fragment text starts at the attachment point.
enum class Element : std::uint8_t { Wildcard, B, C, N, O, P, S, F, Cl, Br, I, Se };

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

std::string_view element_symbol(Element e);
std::optional<Element> element_from_symbol(std::string_view symbol);
double atomic_mass(Element e);
bool aromatic_allowed(Element e);

struct AtomNode {
  Element element = Element::C;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> explicit_h;  // bracket atoms and derived graphs
  int implicit_h = 0;             // valence-model hydrogens when explicit_h is unset
  int attachment_label = 0;       // 1..3 on '*' atoms only

  int hydrogens() const { return explicit_h ? *explicit_h : implicit_h; }
  bool is_wildcard() const { return element == Element::Wildcard; }
};

struct BondEdge {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::Single;
  bool in_ring = false;

  int other(int atom) const { return atom == a ? b : a; }
};

struct Neighbor {
  int atom;
  int bond;
};

class MolecularGraph {
 public:
  int add_atom(const AtomNode& atom);
  // Throws on self bonds, parallel bonds and out-of-range indices.
  int add_bond(int a, int b, BondOrder order);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  const AtomNode& atom(int i) const { return atoms_[i]; }
  AtomNode& atom(int i) { return atoms_[i]; }
  const BondEdge& bond(int i) const { return bonds_[i]; }
  BondEdge& bond(int i) { return bonds_[i]; }
  std::span<const AtomNode> atoms() const { return atoms_; }
  std::span<const BondEdge> bonds() const { return bonds_; }
  std::span<const Neighbor> neighbors(int atom) const { return adjacency_[atom]; }
  int degree(int atom) const { return static_cast<int>(adjacency_[atom].size()); }
  std::optional<int> find_bond(int a, int b) const;

  // Recomputes BondEdge::in_ring from bridge detection.
  void update_ring_flags();
  // Per-atom component index, components numbered by lowest atom index.
  std::vector<int> component_ids() const;
  int component_count() const;
  int heavy_atom_count() const;
  bool has_ring_bond() const;

  // Sets explicit_h on every atom to its current total, freezing hydrogen
  // counts before atoms or bonds are removed.
  void freeze_hydrogens();

 private:
  std::vector<AtomNode> atoms_;
  std::vector<BondEdge> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
};

// Induced subgraph over `keep` (atom indices, any order). Atom order in the
// result follows `keep`; hydrogens are carried over as explicit counts.
MolecularGraph induced_subgraph(const MolecularGraph& g, std::span<const int> keep);
// Largest connected component by heavy atoms (ties: lowest first atom).
MolecularGraph largest_component(const MolecularGraph& g);

class SmilesError : public Error {
 public:
  SmilesError(std::string message, std::size_t offset)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

MolecularGraph parse_smiles(std::string_view text);

// Hydrogen count the valence model assigns to an unbracketed atom with this
// bonding. Returns nullopt on a valence violation.
std::optional<int> default_hydrogens(const MolecularGraph& g, int atom);

// Per-bond in_ring flags: a bond is in a ring iff it is not a bridge.
std::vector<bool> perceive_rings(const MolecularGraph& g);

enum class LabelMode {
  Keep,    // attachment labels are part of the atom invariant and written
  Ignore,  // labels are neither ranked nor written ('*')
};

// Unique canonical rank per atom from iterative neighbourhood refinement.
std::vector<int> canonical_ranks(const MolecularGraph& g, LabelMode mode = LabelMode::Keep);

struct WriteResult {
  std::string text;
  // Wildcard atoms in order of appearance in text.
  std::vector<int> wildcard_order;
};

// Writes SMILES following the given ranks. Components are emitted sorted by
// their text. `label_override`, when non-empty, replaces attachment labels
// (indexed by atom) at write time.
WriteResult write_smiles(const MolecularGraph& g, std::span<const int> ranks, LabelMode mode,
                         std::span<const int> label_override = {});

std::string write_canonical(const MolecularGraph& g, LabelMode mode = LabelMode::Keep);

struct Descriptors {
  double molecular_weight = 0.0;
  int hbd = 0;
  int hba = 0;
  int heavy_atoms = 0;
};

// Throws Error if the graph contains a wildcard atom.
Descriptors descriptors(const MolecularGraph& g);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// Schematic 2D coordinates, unit bond length, no two atoms closer than 0.25.
std::vector<Point2> schematic_coords(const MolecularGraph& g);
// Standalone SVG drawing of the schematic depiction.
std::string depict_svg(const MolecularGraph& g, int size_px = 240);

}  // namespace precut::chem
