#include <array>

#include "precut/chem.hpp"

namespace precut::chem {
namespace {

struct ElementInfo {
  Element element;
  std::string_view symbol;
  double mass;
  bool aromatic;
};

constexpr std::array<ElementInfo, 12> kElements{{
    {Element::Wildcard, "*", 0.0, false},
    {Element::B, "B", 10.81, true},
    {Element::C, "C", 12.011, true},
    {Element::N, "N", 14.007, true},
    {Element::O, "O", 15.999, true},
    {Element::P, "P", 30.974, true},
    {Element::S, "S", 32.06, true},
    {Element::F, "F", 18.998, false},
    {Element::Cl, "Cl", 35.45, false},
    {Element::Br, "Br", 79.904, false},
    {Element::I, "I", 126.904, false},
    {Element::Se, "Se", 78.971, true},
}};

const ElementInfo& info(Element e) { return kElements[static_cast<std::size_t>(e)]; }

}  // namespace

std::string_view element_symbol(Element e) { return info(e).symbol; }

std::optional<Element> element_from_symbol(std::string_view symbol) {
  for (const auto& row : kElements) {
    if (row.symbol == symbol) return row.element;
  }
  return std::nullopt;
}

double atomic_mass(Element e) { return info(e).mass; }

bool aromatic_allowed(Element e) { return info(e).aromatic; }

}  // namespace precut::chem
