#include <istream>

#include "precut/error.hpp"
#include "precut/tsv.hpp"

namespace precut {

int TsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<int>(i);
  }
  return -1;
}

int TsvTable::require(std::string_view name, std::string_view context) const {
  const int c = column(name);
  if (c < 0) throw Error(std::string(context) + ": missing column '" + std::string(name) + "'");
  return c;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

TsvTable read_tsv(std::istream& in, std::string_view context, bool pad) {
  TsvTable table;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() < table.header.size() && pad) fields.resize(table.header.size());
    if (fields.size() != table.header.size()) {
      throw Error(std::string(context) + ": line " + std::to_string(lineno) + " has " +
                  std::to_string(fields.size()) + " fields, expected " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error(std::string(context) + ": missing header row");
  return table;
}

std::string tsv_line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].find_first_of("\t\n\r") != std::string::npos) {
      throw Error("field contains a tab or newline: " + fields[i]);
    }
    if (i) out += '\t';
    out += fields[i];
  }
  out += '\n';
  return out;
}

}  // namespace precut
