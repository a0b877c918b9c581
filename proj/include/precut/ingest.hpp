#pragma once

// Corpus loading, rule-of-5 filtering and intended target class assignment.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "precut/chem.hpp"
#include "precut/classes.hpp"
#include "precut/exec.hpp"

namespace precut::ingest {

struct ActivityRecord {
  std::string compound_id;
  std::string assay_id;
  std::string target_id;
  std::string target_class;
  std::string type;
  std::string relation;
  std::string value;
  std::string units;
  std::string journal;
  std::string year;

  friend bool operator==(const ActivityRecord&, const ActivityRecord&) = default;
};

struct CompoundRecord {
  std::string compound_id;
  std::string smiles;     // as supplied
  std::string canonical;  // canonical text of the kept component
  chem::MolecularGraph graph;
  chem::Descriptors descriptors;
  std::optional<double> logp;
  // Distinct normalized class names over the compound's activity rows.
  std::vector<std::string> itcs;
  ColorClass color_class = ColorClass::Other;
};

struct SkippedRow {
  int line = 0;
  std::string compound_id;
  std::string reason;
};

struct LoadResult {
  std::vector<CompoundRecord> compounds;
  std::vector<SkippedRow> skipped;
  bool has_logp = false;
};

// Header must name compound_id and smiles; logp is optional. Rows whose
// SMILES fails to parse are skipped. Multi-component SMILES keep the largest
// component. Throws Error on a duplicate compound_id.
LoadResult load_compounds(std::istream& in, Exec exec = Exec::Parallel);
LoadResult load_compounds(const std::filesystem::path& path, Exec exec = Exec::Parallel);

std::vector<ActivityRecord> load_activities(std::istream& in);
std::vector<ActivityRecord> load_activities(const std::filesystem::path& path);

struct RuleOfFive {
  double max_molecular_weight = 500.0;
  int max_hbd = 5;
  int max_hba = 10;
  double max_logp = 5.0;
};

// The logP clause applies only when the record has a logP value.
bool passes_rule_of_five(const CompoundRecord& record, const RuleOfFive& limits = {});

// Eight-class names for recognised target classes, otherwise the trimmed
// lowercase text.
std::string normalize_target_class(std::string_view text);
// Unique class when exactly one of the eight is present, Multiple for two
// or more, Other for none.
ColorClass color_for(std::span<const std::string> itcs);
// Sets itcs and color_class on every compound from its activity rows.
void assign_itcs(std::span<CompoundRecord> compounds, std::span<const ActivityRecord> activities);

// Compound table as persisted in the store.
void write_compounds(std::ostream& out, std::span<const CompoundRecord> records);
std::vector<CompoundRecord> read_compounds(std::istream& in);
void write_activities(std::ostream& out, std::span<const ActivityRecord> records);

}  // namespace precut::ingest
