#include "dsvnlms/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace dsvnlms {

namespace {

constexpr std::size_t kTraceColumns = 12;

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view field, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad number '" +
                             std::string(field) + "'");
  }
  return v;
}

std::size_t parse_index(std::string_view field, std::size_t line_no) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw std::runtime_error("trace line " + std::to_string(line_no) + ": bad index '" +
                             std::string(field) + "'");
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_trace_csv(std::ostream& os, std::span<const IterationRecord> records) {
  os << kTraceHeader << '\n';
  for (const auto& r : records) {
    os << r.k << ',' << format_double(r.e) << ',' << format_double(r.e_tilde) << ','
       << format_double(r.n) << ',' << (r.updated ? 1 : 0) << ',' << format_double(r.mu_bar)
       << ',' << format_double(r.alpha) << ',' << format_double(r.gamma_used) << ','
       << format_double(r.wtilde_sq_before) << ',' << format_double(r.wtilde_sq_after) << ','
       << format_double(r.lhs) << ',' << format_double(r.rhs) << '\n';
  }
}

std::vector<IterationRecord> read_trace_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(is, line)) throw std::runtime_error("trace is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTraceHeader) throw std::runtime_error("trace line 1: unexpected header");

  std::vector<IterationRecord> records;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kTraceColumns) {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": expected " +
                               std::to_string(kTraceColumns) + " fields");
    }
    IterationRecord r;
    r.k = parse_index(f[0], line_no);
    r.e = parse_double(f[1], line_no);
    r.e_tilde = parse_double(f[2], line_no);
    r.n = parse_double(f[3], line_no);
    if (f[4] != "0" && f[4] != "1") {
      throw std::runtime_error("trace line " + std::to_string(line_no) + ": updated must be 0 or 1");
    }
    r.updated = f[4] == "1";
    r.mu_bar = parse_double(f[5], line_no);
    r.alpha = parse_double(f[6], line_no);
    r.gamma_used = parse_double(f[7], line_no);
    r.wtilde_sq_before = parse_double(f[8], line_no);
    r.wtilde_sq_after = parse_double(f[9], line_no);
    r.lhs = parse_double(f[10], line_no);
    r.rhs = parse_double(f[11], line_no);
    records.push_back(r);
  }
  return records;
}

void write_curve_csv(std::ostream& os, std::string_view name, std::span<const double> values) {
  os << "k," << name << '\n';
  for (std::size_t k = 0; k < values.size(); ++k) os << k << ',' << format_double(values[k]) << '\n';
}

TraceCheck check_trace(std::span<const IterationRecord> records) {
  TraceCheck c;
  c.rows = records.size();
  for (const auto& r : records) {
    if (!check_local(r)) {
      ++c.local_violations;
      c.violating_rows.push_back(r.k);
    }
  }
  if (!records.empty()) {
    c.global_violations = count_global_violations(records, records.front().wtilde_sq_before);
  }
  return c;
}

}  // namespace dsvnlms
