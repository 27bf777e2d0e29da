#pragma once

#include <string>
#include <vector>

namespace swingid {

// Column-oriented numeric CSV table with a mandatory header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> cols;  // cols[j][i], same length per column

  std::size_t rows() const { return cols.empty() ? 0 : cols[0].size(); }

  // Index of a header name; throws IoError when absent.
  std::size_t col_index(const std::string& name) const;
  bool has_col(const std::string& name) const;
  const std::vector<double>& col(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

// Writes with "%.12g" formatting; stable for byte-comparison of reruns.
void write_csv(const std::string& path, const CsvTable& table);

// Shared numeric formatting for all text outputs.
std::string fmt_num(double v);

}  // namespace swingid
