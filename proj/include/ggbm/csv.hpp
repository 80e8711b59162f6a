#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggbm/types.hpp"

namespace ggbm {

// Minimal CSV support for the flat comma-separated files this project reads
// and writes. Fields must not contain commas or newlines; a leading '#' line
// is treated as a comment and skipped on read.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;  // 1-based source line per row

  int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);
std::vector<std::string> split_csv_line(const std::string& line);

std::optional<double> parse_optional_double(const std::string& field, const std::string& where);
double parse_double(const std::string& field, const std::string& where);

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);
  ~CsvWriter();
  void comment(const std::string& text);
  void row(const std::vector<std::string>& fields);
  void close();

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace ggbm
