#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsvnlms/robustness.hpp"

namespace dsvnlms {

/// Shortest "%.17g" rendering; round-trips every finite double.
std::string format_double(double v);

/// Column order of the per-iteration trace.
inline constexpr std::string_view kTraceHeader =
    "k,e,e_tilde,n,updated,mu_bar,alpha,gamma_used,wtilde_sq_before,wtilde_sq_after,lhs,rhs";

void write_trace_csv(std::ostream& os, std::span<const IterationRecord> records);

/// Parses a trace written by write_trace_csv. Throws std::runtime_error with
/// the offending line number on malformed input.
std::vector<IterationRecord> read_trace_csv(std::istream& is);

/// Two-column (iteration, value) series under the header "k,<name>".
void write_curve_csv(std::ostream& os, std::string_view name, std::span<const double> values);

struct TraceCheck {
  std::size_t rows = 0;
  std::size_t local_violations = 0;
  std::size_t global_violations = 0;
  std::vector<std::size_t> violating_rows;  // k of each local violation

  bool ok() const noexcept { return local_violations == 0 && global_violations == 0; }
};

/// Re-verifies the local bound on every row and the global ratio at every
/// prefix, taking ||w~(0)||^2 from the first row.
TraceCheck check_trace(std::span<const IterationRecord> records);

}  // namespace dsvnlms
