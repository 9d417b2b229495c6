#pragma once

#include <string>
#include <variant>
#include <vector>

namespace airyspec {

inline constexpr const char* program_name = "airy-barrier-spectral";
inline constexpr const char* program_version = "1.0";

enum class Format { Csv, Json };

using Cell = std::variant<double, std::string>;

// A flat result table plus the provenance echoed into every file.
struct Table {
  std::string params;  // "key=value key=value ..."
  std::string utc;     // ISO 8601, seconds
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string utc_now();

// "# airy-barrier-spectral v1.0 | params: ... | UTC: ..."
std::string header_line(const std::string& params, const std::string& utc);

// 17 significant digits, scientific notation.
std::string format_double(double v);

std::string emit(const Table& t, Format f);
std::string emit_csv(const Table& t);
std::string emit_json(const Table& t);

// Throws Error(Validation) on malformed input.
Table parse_csv(const std::string& text);
Table parse_json(const std::string& text);
Table parse(const std::string& text, Format f);

}  // namespace airyspec
