#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace uplink::cli {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvField>& fields) {
  if (fields.size() != columns_) throw std::logic_error("CSV row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [this](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out_ << format_number(v);
          } else {
            out_ << v;
          }
        },
        fields[i]);
  }
  out_ << '\n';
}

}  // namespace uplink::cli
