#pragma once

// CSV serialization: `.` decimals, `,` separators, LF endings, mandatory
// header, 17 significant digits so doubles round-trip exactly.

#include "ell0/l0calc.hpp"
#include "ell0/oracle.hpp"
#include "ell0/solvers.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace ell0::io {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s, const std::string& where) {
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') throw ConfigError(where + ": not a number '" + s + "'");
  return v;
}

inline void write_trace_csv(std::ostream& out, const SolverTrace& trace) {
  if (trace.rows.empty()) return;
  const Eigen::Index n = trace.rows.front().x.size();
  out << "k";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  out << ",f,l0,total,support,step_kind\n";
  for (const TraceRow& r : trace.rows) {
    out << r.k;
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(r.x[i]);
    out << ',' << format_double(r.f) << ',' << r.l0 << ',' << format_double(r.total) << ','
        << r.support.to_bitstring() << ',' << to_string(r.kind) << '\n';
  }
}

// Reads back the columns written by write_trace_csv (direction norms are not serialized).
inline std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("trace csv: empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 7 || header.front() != "k" || header.back() != "step_kind")
    throw ConfigError("trace csv: unexpected header '" + line + "'");
  const std::size_t n = header.size() - 6;

  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const std::string where = "trace csv line " + std::to_string(lineno);
    if (cells.size() != header.size()) throw ConfigError(where + ": expected " + std::to_string(header.size()) + " fields");
    TraceRow r;
    r.k = static_cast<std::size_t>(std::stoull(cells[0]));
    r.x = Point(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) r.x[static_cast<Eigen::Index>(i)] = parse_double(cells[1 + i], where);
    r.f = parse_double(cells[n + 1], where);
    r.l0 = static_cast<std::size_t>(std::stoull(cells[n + 2]));
    r.total = parse_double(cells[n + 3], where);
    r.support = SupportPattern::from_bitstring(cells[n + 4]);
    r.kind = step_kind_from_string(cells[n + 5]);
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_catalog_csv(std::ostream& out, const SupportCatalog& cat) {
  if (cat.entries.empty()) return;
  const Eigen::Index n = cat.entries.front().minimizer.size();
  out << "support_bits";
  for (Eigen::Index i = 1; i <= n; ++i) out << ",x*_" << i;
  out << ",f,l0_effective,total,is_local_min\n";
  for (const CatalogEntry& e : cat.entries) {
    out << e.support.to_bitstring();
    for (Eigen::Index i = 0; i < n; ++i) out << ',' << format_double(e.minimizer[i]);
    out << ',' << format_double(e.f) << ',' << e.l0_effective << ',' << format_double(e.total) << ','
        << (e.is_local_min() ? "true" : "false") << '\n';
  }
}

}  // namespace ell0::io
