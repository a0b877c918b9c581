#include <cctype>
#include <map>

#include "precut/chem.hpp"

namespace precut::chem {
namespace {

struct PendingRing {
  int atom;
  std::optional<BondOrder> order;
  std::size_t offset;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  MolecularGraph run() {
    if (text_.empty()) throw SmilesError("empty SMILES", 0);
    bool expect_atom = true;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (expect_atom) {
        parse_atom();
        expect_atom = false;
        continue;
      }
      if (c == '(') {
        if (prev_ < 0) fail("branch without preceding atom");
        branches_.push_back(prev_);
        ++pos_;
        if (pos_ < text_.size() && is_bond_char(text_[pos_])) pending_bond_ = parse_bond();
        expect_atom = true;
      } else if (c == ')') {
        if (branches_.empty()) fail("unmatched ')'");
        if (pending_bond_) fail("bond symbol before ')'");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
      } else if (c == '.') {
        if (!branches_.empty()) fail("'.' inside branch");
        if (pending_bond_) fail("bond symbol before '.'");
        prev_ = -1;
        ++pos_;
        expect_atom = true;
      } else if (is_bond_char(c)) {
        if (pending_bond_) fail("consecutive bond symbols");
        pending_bond_ = parse_bond();
        // A bond symbol is followed by either an atom or a ring-closure digit.
        if (pos_ < text_.size() && !std::isdigit(static_cast<unsigned char>(text_[pos_])) &&
            text_[pos_] != '%') {
          expect_atom = true;
        }
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        parse_ring_closure();
      } else {
        parse_atom();
      }
    }
    if (expect_atom) fail("SMILES ends where an atom is expected");
    if (!branches_.empty()) fail("unclosed branch");
    if (!rings_.empty()) {
      throw SmilesError("unmatched ring-closure digit " + std::to_string(rings_.begin()->first),
                        rings_.begin()->second.offset);
    }
    finish();
    return std::move(graph_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SmilesError(msg, pos_); }

  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\';
  }

  std::optional<BondOrder> parse_bond() {
    const char c = text_[pos_++];
    switch (c) {
      case '=': return BondOrder::Double;
      case '#': return BondOrder::Triple;
      case ':': return BondOrder::Aromatic;
      default: return BondOrder::Single;  // '-', and stereo '/' '\' collapse to single
    }
  }

  void parse_ring_closure() {
    const std::size_t start = pos_;
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        fail("'%' must be followed by two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_++] - '0';
    }
    if (prev_ < 0) throw SmilesError("ring closure without preceding atom", start);
    auto it = rings_.find(number);
    if (it == rings_.end()) {
      rings_[number] = PendingRing{prev_, pending_bond_, start};
      pending_bond_.reset();
      return;
    }
    const PendingRing open = it->second;
    rings_.erase(it);
    std::optional<BondOrder> order = pending_bond_ ? pending_bond_ : open.order;
    if (pending_bond_ && open.order && *pending_bond_ != *open.order) {
      throw SmilesError("conflicting ring-closure bond orders", start);
    }
    pending_bond_.reset();
    if (open.atom == prev_) throw SmilesError("ring closure to the same atom", start);
    if (graph_.find_bond(open.atom, prev_)) throw SmilesError("duplicate bond via ring closure", start);
    connect(open.atom, prev_, order);
  }

  void connect(int a, int b, std::optional<BondOrder> order) {
    bool implicit = !order.has_value();
    BondOrder o = BondOrder::Single;
    if (order) {
      o = *order;
    } else if (graph_.atom(a).aromatic && graph_.atom(b).aromatic) {
      o = BondOrder::Aromatic;
    }
    const int idx = graph_.add_bond(a, b, o);
    if (implicit && o == BondOrder::Aromatic) implicit_aromatic_.push_back(idx);
  }

  void parse_atom() {
    const std::size_t start = pos_;
    AtomNode atom;
    bool bracket = false;
    const char c = text_[pos_];
    if (c == '[') {
      bracket = true;
      parse_bracket(atom);
    } else if (c == '*') {
      atom.element = Element::Wildcard;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
        atom.element = Element::Cl;
        pos_ += 2;
      } else if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
        atom.element = Element::Br;
        pos_ += 2;
      } else {
        auto e = element_from_symbol(std::string_view(&text_[pos_], 1));
        if (!e || *e == Element::Se) {
          throw SmilesError("unsupported element '" + std::string(1, c) + "'", start);
        }
        atom.element = *e;
        ++pos_;
      }
    } else if (std::islower(static_cast<unsigned char>(c))) {
      const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      auto e = element_from_symbol(std::string_view(&up, 1));
      if (!e || !aromatic_allowed(*e)) {
        throw SmilesError("unsupported aromatic atom '" + std::string(1, c) + "'", start);
      }
      atom.element = *e;
      atom.aromatic = true;
      ++pos_;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }

    const int idx = graph_.add_atom(atom);
    bracketed_.push_back(bracket);
    offsets_.push_back(start);
    if (prev_ >= 0) connect(prev_, idx, pending_bond_);
    pending_bond_.reset();
    prev_ = idx;
  }

  void parse_bracket(AtomNode& atom) {
    const std::size_t start = pos_;
    ++pos_;  // '['
    auto at_end = [&] { return pos_ >= text_.size(); };
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;  // isotope
    if (at_end()) fail("unterminated bracket atom");

    const char c = text_[pos_];
    if (c == '*') {
      atom.element = Element::Wildcard;
      ++pos_;
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      std::size_t len = 1;
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) len = 2;
      const std::string symbol(text_.substr(pos_, len));
      auto e = element_from_symbol(symbol);
      if (!e || *e == Element::Wildcard) throw SmilesError("unsupported element '" + symbol + "'", start);
      atom.element = *e;
      pos_ += len;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      if (text_.substr(pos_, 2) == "se") {
        atom.element = Element::Se;
        pos_ += 2;
      } else {
        const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        auto e = element_from_symbol(std::string_view(&up, 1));
        if (!e || !aromatic_allowed(*e)) {
          throw SmilesError("unsupported aromatic atom '" + std::string(1, c) + "'", start);
        }
        atom.element = *e;
        ++pos_;
      }
      atom.aromatic = true;
    } else {
      fail("expected element symbol in bracket atom");
    }

    // Chirality is accepted and dropped.
    while (!at_end() && text_[pos_] == '@') ++pos_;
    if (!at_end() && std::isupper(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != 'H') {
      while (!at_end() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    int h = 0;
    if (!at_end() && text_[pos_] == 'H') {
      ++pos_;
      h = 1;
      if (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) h = text_[pos_++] - '0';
    }
    atom.explicit_h = h;

    if (!at_end() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      int magnitude = 0;
      while (!at_end() && text_[pos_] == sign) {
        ++magnitude;
        ++pos_;
      }
      if (magnitude == 1 && !at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        magnitude = 0;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          magnitude = magnitude * 10 + (text_[pos_++] - '0');
        }
      }
      atom.formal_charge = sign == '+' ? magnitude : -magnitude;
    }

    if (!at_end() && text_[pos_] == ':') {
      ++pos_;
      if (at_end() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) fail("atom class needs digits");
      int label = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        label = label * 10 + (text_[pos_++] - '0');
      }
      if (atom.is_wildcard()) {
        if (label > 3) throw SmilesError("attachment label must be 0..3", start);
        atom.attachment_label = label;
      }
      // Atom classes on real atoms carry no meaning here and are dropped.
    }
    if (at_end() || text_[pos_] != ']') fail("expected ']'");
    ++pos_;
    if (atom.is_wildcard()) atom.explicit_h = 0;
  }

  void finish() {
    graph_.update_ring_flags();
    // Implicit bonds between aromatic atoms that are not in a ring are the
    // single bond joining two aromatic systems (biphenyl style).
    for (int idx : implicit_aromatic_) {
      if (!graph_.bond(idx).in_ring) graph_.bond(idx).order = BondOrder::Single;
    }
    for (int i = 0; i < graph_.atom_count(); ++i) {
      if (bracketed_[i]) continue;
      auto h = default_hydrogens(graph_, i);
      if (!h) throw SmilesError("valence violation", offsets_[i]);
      graph_.atom(i).implicit_h = *h;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  MolecularGraph graph_;
  int prev_ = -1;
  std::optional<BondOrder> pending_bond_;
  std::vector<int> branches_;
  std::map<int, PendingRing> rings_;
  std::vector<int> implicit_aromatic_;
  std::vector<bool> bracketed_;
  std::vector<std::size_t> offsets_;
};

}  // namespace

MolecularGraph parse_smiles(std::string_view text) {
  try {
    return Parser(text).run();
  } catch (const SmilesError&) {
    throw;
  } catch (const Error& e) {
    // Graph-level rejections (e.g. aromatic halogen) surface as syntax errors.
    throw SmilesError(e.what(), 0);
  }
}

}  // namespace precut::chem
