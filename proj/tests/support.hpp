#pragma once

// Shared helpers and brute-force oracles for the test binaries.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "precut/chem.hpp"
#include "precut/classes.hpp"
#include "precut/ingest.hpp"
#include "precut/mmp.hpp"
#include "precut/netbuild.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path source_dir() { return fs::path(PRECUT_SOURCE_DIR); }

class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("precut_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

// Same molecule with atoms re-added in random order and bonds shuffled.
inline precut::chem::MolecularGraph permuted(const precut::chem::MolecularGraph& g, std::mt19937_64& rng) {
  using namespace precut::chem;
  std::vector<int> order(g.atom_count());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> where(g.atom_count());
  MolecularGraph out;
  for (int i = 0; i < g.atom_count(); ++i) {
    where[order[i]] = i;
    out.add_atom(g.atom(order[i]));
  }
  std::vector<int> bonds(g.bond_count());
  std::iota(bonds.begin(), bonds.end(), 0);
  std::shuffle(bonds.begin(), bonds.end(), rng);
  for (int b : bonds) {
    const auto& e = g.bond(b);
    if (rng() & 1) {
      out.add_bond(where[e.a], where[e.b], e.order);
    } else {
      out.add_bond(where[e.b], where[e.a], e.order);
    }
  }
  out.update_ring_flags();
  return out;
}

// Backtracking isomorphism test over element, aromaticity, charge,
// hydrogens, label and bond order. Fine for molecules of a few dozen atoms.
inline bool isomorphic(const precut::chem::MolecularGraph& a, const precut::chem::MolecularGraph& b) {
  using namespace precut::chem;
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count()) return false;
  const int n = a.atom_count();
  auto same_atom = [&](int i, int j) {
    const auto &x = a.atom(i), &y = b.atom(j);
    return x.element == y.element && x.aromatic == y.aromatic && x.formal_charge == y.formal_charge &&
           x.hydrogens() == y.hydrogens() && x.attachment_label == y.attachment_label && a.degree(i) == b.degree(j);
  };
  std::vector<int> map(n, -1), used(n, 0);
  std::function<bool(int)> go = [&](int i) {
    if (i == n) return true;
    for (int j = 0; j < n; ++j) {
      if (used[j] || !same_atom(i, j)) continue;
      bool ok = true;
      for (const auto& nb : a.neighbors(i)) {
        if (nb.atom >= i) continue;
        const auto bj = b.find_bond(j, map[nb.atom]);
        if (!bj || b.bond(*bj).order != a.bond(nb.bond).order) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      map[i] = j;
      used[j] = 1;
      if (go(i + 1)) return true;
      used[j] = 0;
    }
    map[i] = -1;
    return false;
  };
  return go(0);
}

// A bond is a bridge iff deleting it disconnects its endpoints.
inline std::vector<bool> bridges_by_deletion(const precut::chem::MolecularGraph& g) {
  std::vector<bool> out(g.bond_count());
  for (int skip = 0; skip < g.bond_count(); ++skip) {
    std::vector<char> seen(g.atom_count(), 0);
    std::vector<int> stack{g.bond(skip).a};
    seen[g.bond(skip).a] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& nb : g.neighbors(v)) {
        if (nb.bond == skip || seen[nb.atom]) continue;
        seen[nb.atom] = 1;
        stack.push_back(nb.atom);
      }
    }
    out[skip] = !seen[g.bond(skip).b];
  }
  return out;
}

// Acyclic single bonds between heavy atoms, counted from first principles.
inline int cuttable_bond_count(const precut::chem::MolecularGraph& g) {
  const auto bridge = bridges_by_deletion(g);
  int n = 0;
  for (int i = 0; i < g.bond_count(); ++i) {
    const auto& e = g.bond(i);
    if (bridge[i] && e.order == precut::chem::BondOrder::Single && !g.atom(e.a).is_wildcard() &&
        !g.atom(e.b).is_wildcard()) {
      ++n;
    }
  }
  return n;
}

// Random SMILES over a tree of small units; rings and branches included.
// Every output parses.
inline std::string random_smiles(std::mt19937_64& rng, int units) {
  static const std::vector<std::string> kUnits = {"C", "C", "C", "N", "O", "CC", "C(=O)", "C(F)", "c1ccc(cc1)",
                                                  "C1CC(CC1)", "C(C)(C)", "S(=O)(=O)", "C#C", "C=C", "Cl"};
  std::uniform_int_distribution<std::size_t> pick(0, kUnits.size() - 1);
  std::string s;
  for (int i = 0; i < units; ++i) {
    auto u = kUnits[pick(rng)];
    if (u == "Cl" && i + 1 < units) u = "C";
    s += u;
  }
  return s;
}

inline std::vector<precut::mmp::CorpusEntry> corpus_from(const std::vector<precut::ingest::CompoundRecord>& records) {
  std::vector<precut::mmp::CorpusEntry> out;
  for (const auto& r : records) out.push_back({r.compound_id, r.graph});
  return out;
}

inline std::vector<precut::ingest::CompoundRecord> load_corpus(const std::string& name) {
  return precut::ingest::load_compounds(source_dir() / "data" / name / "compounds.tsv").compounds;
}

// Brute-force MMP oracle: every compound pair that shares a key with
// different values, found by direct pairwise intersection of key sets.
inline std::set<std::pair<std::string, std::string>> mmp_pairs_by_intersection(
    std::span<const precut::mmp::CorpusEntry> corpus, int max_value_heavy) {
  std::vector<std::map<std::string, std::set<std::string>>> keys(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (const auto& r : precut::mmp::index_fragmentations(corpus[i].graph, corpus[i].compound_id, max_value_heavy)) {
      keys[i][r.key].insert(r.value);
    }
  }
  std::set<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    for (std::size_t j = i + 1; j < corpus.size(); ++j) {
      bool hit = false;
      for (const auto& [k, va] : keys[i]) {
        auto it = keys[j].find(k);
        if (it == keys[j].end()) continue;
        // Differ in at least one value choice.
        if (va.size() > 1 || it->second.size() > 1 || *va.begin() != *it->second.begin()) {
          hit = true;
          break;
        }
      }
      if (hit) {
        auto a = corpus[i].compound_id, b = corpus[j].compound_id;
        if (b < a) std::swap(a, b);
        out.emplace(a, b);
      }
    }
  }
  return out;
}

// Component labels by BFS, independent of the library's union-find.
inline std::vector<int> bfs_labels(const precut::net::NetworkGraph& g) {
  std::vector<int> label(g.node_count(), -1);
  int next = 0;
  for (int s = 0; s < g.node_count(); ++s) {
    if (label[s] >= 0) continue;
    std::vector<int> queue{s};
    label[s] = next;
    for (std::size_t h = 0; h < queue.size(); ++h) {
      for (int v : g.neighbors(queue[h])) {
        if (label[v] < 0) {
          label[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

struct ItcCase {
  std::string compound_id;
  std::vector<std::string> target_classes;  // one activity row each
  precut::ColorClass expected;
};

// 30 compounds: single-class, multi-class and no-class annotations, with
// alias spellings, repeated rows and unlisted classes mixed in.
inline std::vector<ItcCase> itc_fixture() {
  using C = precut::ColorClass;
  return {
      {"S01", {"CYP450"}, C::CYP450},
      {"S02", {"GPCR"}, C::GPCR},
      {"S03", {"Ion channel"}, C::IonChannel},
      {"S04", {"Kinase"}, C::Kinase},
      {"S05", {"Nuclear receptor"}, C::Nuclear},
      {"S06", {"PDE"}, C::PDE},
      {"S07", {"Phosphatase"}, C::Phosphatase},
      {"S08", {"Protease"}, C::Protease},
      {"S09", {"kinase", "Kinase", "KINASE"}, C::Kinase},
      {"S10", {"GPCR", "transporter"}, C::GPCR},
      {"S11", {"ion channel", "enzyme", "ion  channel"}, C::IonChannel},
      {"S12", {"cytochrome P450", "membrane receptor"}, C::CYP450},
      {"M01", {"Kinase", "GPCR"}, C::Multiple},
      {"M02", {"GPCR", "Kinase"}, C::Multiple},
      {"M03", {"CYP450", "PDE"}, C::Multiple},
      {"M04", {"Ion channel", "Nuclear"}, C::Multiple},
      {"M05", {"Phosphatase", "Protease"}, C::Multiple},
      {"M06", {"Kinase", "GPCR", "Protease"}, C::Multiple},
      {"M07", {"PDE", "transporter", "Phosphatase"}, C::Multiple},
      {"M08", {"nuclear", "kinase", "kinase"}, C::Multiple},
      {"M09", {"GPCR", "Ion Channel"}, C::Multiple},
      {"M10", {"CYP450", "Kinase", "GPCR", "PDE", "Protease"}, C::Multiple},
      {"O01", {}, C::Other},
      {"O02", {"transporter"}, C::Other},
      {"O03", {"enzyme"}, C::Other},
      {"O04", {"transporter", "enzyme"}, C::Other},
      {"O05", {"Multiple"}, C::Other},
      {"O06", {"unknown"}, C::Other},
      {"O07", {"membrane receptor"}, C::Other},
      {"O08", {"other cytosolic protein"}, C::Other},
  };
}

}  // namespace testing
