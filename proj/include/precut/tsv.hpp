#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace precut {

// Tab-delimited table with a header row; no quoting or escaping.
struct TsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name, or -1.
  int column(std::string_view name) const;
  // Column index by name; throws Error naming `context` when absent.
  int require(std::string_view name, std::string_view context) const;
};

std::vector<std::string> split_tabs(std::string_view line);

// Reads the header and every non-empty row. Rows with a different field count
// than the header throw Error (line number in the message). Missing trailing
// optional fields are padded with empty strings when `pad` is set.
TsvTable read_tsv(std::istream& in, std::string_view context, bool pad = false);

// Joins fields with tabs; throws Error if any field contains a tab or newline.
std::string tsv_line(const std::vector<std::string>& fields);

}  // namespace precut
