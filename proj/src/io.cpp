#include "airyspec/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <json.hpp>
#include <sstream>

#include "airyspec/types.hpp"

namespace airyspec {

namespace {

using ojson = nlohmann::ordered_json;

const std::string kPrefix = std::string("# ") + program_name + " v";

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::Validation, "parse: " + what); }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Cell parse_cell(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec == std::errc() && ptr == end && !s.empty()) return v;
  if (s == "nan" || s == "inf" || s == "-inf") return std::strtod(s.c_str(), nullptr);
  return s;
}

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

void parse_header(const std::string& line, Table& t) {
  if (line.rfind(kPrefix, 0) != 0) bad("missing header line");
  const std::string p = " | params: ", u = " | UTC: ";
  const auto ip = line.find(p), iu = line.rfind(u);
  if (ip == std::string::npos || iu == std::string::npos || iu < ip) bad("malformed header line");
  t.params = line.substr(ip + p.size(), iu - ip - p.size());
  t.utc = line.substr(iu + u.size());
}

}  // namespace

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string header_line(const std::string& params, const std::string& utc) {
  return kPrefix + program_version + " | params: " + params + " | UTC: " + utc;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string emit_csv(const Table& t) {
  std::string out = header_line(t.params, t.utc) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_text(row[i]);
    out += "\n";
  }
  return out;
}

Table parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Table t;
  if (!std::getline(in, line)) bad("empty input");
  parse_header(line, t);
  if (!std::getline(in, line)) bad("missing column line");
  t.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto parts = split(line, ',');
    if (parts.size() != t.columns.size()) bad("row width differs from header");
    std::vector<Cell> row;
    for (const auto& p : parts) row.push_back(parse_cell(p));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string emit_json(const Table& t) {
  ojson j;
  j["header"] = header_line(t.params, t.utc);
  j["columns"] = t.columns;
  ojson records = ojson::array();
  for (const auto& row : t.rows) {
    ojson r = ojson::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const double* d = std::get_if<double>(&row[i])) {
        // JSON has no inf/nan; those travel as strings.
        if (std::isfinite(*d)) r[t.columns[i]] = *d; else r[t.columns[i]] = format_double(*d);
      } else {
        r[t.columns[i]] = std::get<std::string>(row[i]);
      }
    }
    records.push_back(std::move(r));
  }
  j["records"] = std::move(records);
  return j.dump(2) + "\n";
}

Table parse_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const std::exception& e) {
    bad(e.what());
  }
  if (!j.is_object() || !j.contains("header") || !j.contains("columns") || !j.contains("records")) {
    bad("missing header, columns or records");
  }
  Table t;
  parse_header(j["header"].get<std::string>(), t);
  t.columns = j["columns"].get<std::vector<std::string>>();
  for (const auto& r : j["records"]) {
    std::vector<Cell> row;
    for (const auto& c : t.columns) {
      if (!r.contains(c)) bad("record lacks column " + c);
      const auto& v = r[c];
      if (v.is_number()) {
        row.emplace_back(v.get<double>());
      } else if (v.is_string()) {
        const Cell cell = parse_cell(v.get<std::string>());
        if (const double* d = std::get_if<double>(&cell); d && !std::isfinite(*d)) row.push_back(cell);
        else row.emplace_back(v.get<std::string>());
      } else {
        bad("unsupported value in column " + c);
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string emit(const Table& t, Format f) { return f == Format::Csv ? emit_csv(t) : emit_json(t); }

Table parse(const std::string& text, Format f) { return f == Format::Csv ? parse_csv(text) : parse_json(text); }

}  // namespace airyspec
