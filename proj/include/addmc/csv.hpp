#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace addmc {

using CsvCell = std::variant<double, long long, std::string>;

/// Fixed column order; doubles are written with 12 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> columns);

  void row(std::initializer_list<CsvCell> cells);
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ostream& out_;
  std::size_t width_;
};

std::string format_number(double v);

}  // namespace addmc
