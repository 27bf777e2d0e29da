#include "swingid/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "swingid/errors.hpp"

namespace swingid {

std::size_t CsvTable::col_index(const std::string& name) const {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw IoError("csv: missing column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

bool CsvTable::has_col(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

const std::vector<double>& CsvTable::col(const std::string& name) const {
  return cols[col_index(name)];
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv file: " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      // trim spaces around header names
      std::size_t b = cell.find_first_not_of(" \t");
      std::size_t e = cell.find_last_not_of(" \t");
      t.header.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
  }
  t.cols.assign(t.header.size(), {});
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::size_t j = 0;
    while (std::getline(ls, cell, ',')) {
      if (j >= t.cols.size())
        throw IoError(path + ":" + std::to_string(lineno) + ": too many columns");
      try {
        t.cols[j].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError(path + ":" + std::to_string(lineno) + ": cannot parse '" + cell + "'");
      }
      ++j;
    }
    if (j != t.cols.size())
      throw IoError(path + ":" + std::to_string(lineno) + ": expected " +
                    std::to_string(t.cols.size()) + " columns, got " + std::to_string(j));
  }
  for (std::size_t j = 0; j < t.cols.size(); ++j)
    for (double v : t.cols[j])
      if (!std::isfinite(v))
        throw ValidationError(path + ": non-finite value in column '" + t.header[j] + "'");
  return t;
}

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write csv file: " + path);
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j) out << ',';
    out << table.header[j];
  }
  out << '\n';
  const std::size_t n = table.rows();
  for (std::size_t j = 0; j < table.cols.size(); ++j)
    if (table.cols[j].size() != n) throw IoError("csv: ragged columns in '" + path + "'");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < table.cols.size(); ++j) {
      if (j) out << ',';
      out << fmt_num(table.cols[j][i]);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace swingid
