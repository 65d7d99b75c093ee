#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace uplink::cli {

using CsvField = std::variant<double, long, std::string>;

// Comma-separated rows, LF line endings, doubles at 9 significant digits.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<CsvField>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string format_number(double v);

}  // namespace uplink::cli
