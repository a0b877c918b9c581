#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "precut/error.hpp"
#include "precut/ingest.hpp"
#include "precut/tsv.hpp"

namespace precut::ingest {

namespace {

std::optional<double> parse_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

// Parses and derives everything for one compound row. Throws on bad input.
CompoundRecord build_record(const std::string& id, const std::string& smiles) {
  CompoundRecord r;
  r.compound_id = id;
  r.smiles = smiles;
  auto g = chem::parse_smiles(smiles);
  if (g.atom_count() == 0) throw Error("empty structure");
  for (const auto& a : g.atoms()) {
    if (a.is_wildcard()) throw Error("wildcard atom in compound");
  }
  // Salts and solvents: keep the largest component.
  r.graph = chem::largest_component(g);
  r.graph.update_ring_flags();
  r.canonical = chem::write_canonical(r.graph);
  r.descriptors = chem::descriptors(r.graph);
  return r;
}

}  // namespace

LoadResult load_compounds(std::istream& in, Exec exec) {
  const auto table = read_tsv(in, "compounds", true);
  const int id_col = table.require("compound_id", "compounds");
  const int smiles_col = table.require("smiles", "compounds");
  const int logp_col = table.column("logp");

  LoadResult out;
  out.has_logp = logp_col >= 0;
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& id = table.rows[i][id_col];
    if (!id.empty() && !ids.insert(id).second) throw Error("duplicate compound_id '" + id + "' in compounds");
  }

  const long n = static_cast<long>(table.rows.size());
  std::vector<std::optional<CompoundRecord>> built(n);
  std::vector<std::string> errors(n);
  auto one = [&](long i) {
    const auto& row = table.rows[i];
    try {
      if (row[id_col].empty()) throw Error("empty compound_id");
      CompoundRecord r = build_record(row[id_col], row[smiles_col]);
      if (logp_col >= 0 && !row[logp_col].empty()) {
        r.logp = parse_number(row[logp_col]);
        if (!r.logp) throw Error("bad logp value '" + row[logp_col] + "'");
      }
      built[i] = std::move(r);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) one(i);
  } else {
    for (long i = 0; i < n; ++i) one(i);
  }
  for (long i = 0; i < n; ++i) {
    if (built[i]) {
      out.compounds.push_back(std::move(*built[i]));
    } else {
      // Line numbers count the header as line 1.
      out.skipped.push_back({static_cast<int>(i) + 2, table.rows[i][id_col], errors[i]});
      spdlog::warn("skipping compound '{}' (line {}): {}", table.rows[i][id_col], i + 2, errors[i]);
    }
  }
  return out;
}

LoadResult load_compounds(const std::filesystem::path& path, Exec exec) {
  auto in = open_input(path);
  return load_compounds(in, exec);
}

std::vector<ActivityRecord> load_activities(std::istream& in) {
  const auto t = read_tsv(in, "activities", true);
  const int id = t.require("compound_id", "activities");
  const int assay = t.require("assay_id", "activities");
  const int target = t.require("target_id", "activities");
  const int cls = t.require("target_class", "activities");
  const int type = t.column("type"), relation = t.column("relation"), value = t.column("value");
  const int units = t.column("units"), journal = t.column("journal"), year = t.column("year");
  auto opt = [](const std::vector<std::string>& row, int c) { return c >= 0 ? row[c] : std::string(); };
  std::vector<ActivityRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row[id].empty() || row[cls].empty()) {
      throw Error("activities line " + std::to_string(i + 2) + ": compound_id and target_class are required");
    }
    out.push_back({row[id], row[assay], row[target], row[cls], opt(row, type), opt(row, relation), opt(row, value),
                   opt(row, units), opt(row, journal), opt(row, year)});
  }
  return out;
}

std::vector<ActivityRecord> load_activities(const std::filesystem::path& path) {
  auto in = open_input(path);
  return load_activities(in);
}

bool passes_rule_of_five(const CompoundRecord& r, const RuleOfFive& limits) {
  const auto& d = r.descriptors;
  if (d.molecular_weight > limits.max_molecular_weight) return false;
  if (d.hbd > limits.max_hbd || d.hba > limits.max_hba) return false;
  if (r.logp && *r.logp > limits.max_logp) return false;
  return true;
}

std::string normalize_target_class(std::string_view text) {
  if (auto c = parse_class(text); c && static_cast<int>(*c) < kTargetClassCount) return std::string(class_name(*c));
  std::string s;
  for (char c : text) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

ColorClass color_for(std::span<const std::string> itcs) {
  std::set<ColorClass> eight;
  for (const auto& name : itcs) {
    if (auto c = parse_class(name); c && static_cast<int>(*c) < kTargetClassCount) eight.insert(*c);
  }
  if (eight.size() == 1) return *eight.begin();
  return eight.empty() ? ColorClass::Other : ColorClass::Multiple;
}

void assign_itcs(std::span<CompoundRecord> compounds, std::span<const ActivityRecord> activities) {
  std::map<std::string, std::set<std::string>> by_compound;
  for (const auto& a : activities) {
    auto name = normalize_target_class(a.target_class);
    if (!name.empty()) by_compound[a.compound_id].insert(std::move(name));
  }
  for (auto& c : compounds) {
    auto it = by_compound.find(c.compound_id);
    c.itcs = it == by_compound.end() ? std::vector<std::string>{}
                                     : std::vector<std::string>(it->second.begin(), it->second.end());
    c.color_class = color_for(c.itcs);
  }
}

void write_compounds(std::ostream& out, std::span<const CompoundRecord> records) {
  out << tsv_line({"compound_id", "smiles", "canonical", "logp", "itcs", "color_class"});
  for (const auto& r : records) {
    std::string itcs;
    for (const auto& s : r.itcs) itcs += (itcs.empty() ? "" : ";") + s;
    out << tsv_line({r.compound_id, r.smiles, r.canonical, r.logp ? format_number(*r.logp) : std::string(), itcs,
                     std::string(class_name(r.color_class))});
  }
}

std::vector<CompoundRecord> read_compounds(std::istream& in) {
  const auto t = read_tsv(in, "compound table");
  const int id = t.require("compound_id", "compound table"), smiles = t.require("smiles", "compound table");
  const int canonical = t.require("canonical", "compound table"), logp = t.require("logp", "compound table");
  const int itcs = t.require("itcs", "compound table"), color = t.require("color_class", "compound table");
  std::vector<CompoundRecord> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    CompoundRecord r;
    r.compound_id = row[id];
    r.smiles = row[smiles];
    r.canonical = row[canonical];
    r.graph = chem::parse_smiles(r.canonical);
    r.descriptors = chem::descriptors(r.graph);
    r.logp = parse_number(row[logp]);
    for (std::size_t b = 0; b < row[itcs].size();) {
      auto e = row[itcs].find(';', b);
      if (e == std::string::npos) e = row[itcs].size();
      r.itcs.push_back(row[itcs].substr(b, e - b));
      b = e + 1;
    }
    auto c = parse_class(row[color]);
    if (!c) throw Error("compound table: bad color_class '" + row[color] + "'");
    r.color_class = *c;
    out.push_back(std::move(r));
  }
  return out;
}

void write_activities(std::ostream& out, std::span<const ActivityRecord> records) {
  out << tsv_line({"compound_id", "assay_id", "target_id", "target_class", "type", "relation", "value", "units",
                   "journal", "year"});
  for (const auto& a : records) {
    out << tsv_line({a.compound_id, a.assay_id, a.target_id, a.target_class, a.type, a.relation, a.value, a.units,
                     a.journal, a.year});
  }
}

}  // namespace precut::ingest
