#include "precut/chem.hpp"

namespace precut::chem {

namespace {
constexpr double kHydrogenMass = 1.008;
}

Descriptors descriptors(const MolecularGraph& g) {
  Descriptors d;
  for (const auto& a : g.atoms()) {
    if (a.is_wildcard()) throw Error("descriptors undefined for graphs with attachment points");
    const int h = a.hydrogens();
    d.molecular_weight += atomic_mass(a.element) + h * kHydrogenMass;
    ++d.heavy_atoms;
    if (a.element == Element::N || a.element == Element::O) {
      ++d.hba;
      if (h > 0) ++d.hbd;
    }
  }
  return d;
}

}  // namespace precut::chem
