#pragma once

#include <string>
#include <vector>

namespace cavcool {

/// Shortest round-trip-safe text form: 17 significant digits, '.' decimal.
std::string format_number(double value);

/// Minimal CSV builder with byte-stable output ('\n' line endings, no quoting:
/// cells must not contain commas).
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_row(std::vector<std::string> cells);

  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  std::string str() const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cavcool
