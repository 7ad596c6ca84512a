#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>

#include "dsvnlms/filters.hpp"
#include "dsvnlms/volterra.hpp"

namespace dsvnlms {

/// Relative slack on the strict inequalities (local bound and global ratio).
inline constexpr double kStrictSlack = 1e-10;
/// Relative tolerance on the equality branch and the error decomposition.
inline constexpr double kEqualityTolerance = 1e-12;

/// One row of the robustness ledger. w~(k) = w* - w(k).
struct IterationRecord {
  std::size_t k = 0;
  double e = 0.0;        // a-priori error
  double e_tilde = 0.0;  // w~(k)^T x(k), the noiseless error
  double n = 0.0;        // injected noise sample
  bool updated = false;
  double mu_bar = 0.0;
  double alpha = 0.0;
  double gamma_used = 0.0;
  double wtilde_sq_before = 0.0;  // ||w~(k)||^2
  double wtilde_sq_after = 0.0;   // ||w~(k+1)||^2
  double lhs = 0.0;               // l(k)
  double rhs = 0.0;               // r(k)
  bool transient = false;         // detector label, not serialized
};

/// Builds the ledger row for iteration k. `x` is the regressor the step used.
IterationRecord record_iteration(std::size_t k, const KernelVector& w_star,
                                 const KernelVector& w_before, const KernelVector& w_after,
                                 const Regressor& x, const StepOutcome& outcome, double n);

/// Same, reading w(k) from `before` and w(k+1) and x(k) from `after`
/// (the delay line is not advanced by a step).
IterationRecord record_iteration(const KernelVector& w_star, const FilterState& before,
                                 const FilterState& after, const StepOutcome& outcome, double n);

/// Local bound at one iteration:
///   updated:      l(k) < r(k) + 1e-10 * max(1, r(k))
///   not updated:  |l(k) - r(k)| <= 1e-12 * max(1, r(k))
bool check_local(const IterationRecord& record);

/// e = e~ + n within 1e-12 relative.
bool check_decomposition(const IterationRecord& record);

/// An update with e~^2 >= n^2 must strictly shrink ||w~||^2.
bool check_conditional_improvement(const IterationRecord& record);

struct GlobalRatio {
  double value = 1.0;
  double numerator = 0.0;
  double denominator = 0.0;
  std::size_t updates = 0;

  /// No updates: the ratio is 1 and the strict bound does not apply.
  bool vacuous() const noexcept { return updates == 0; }
};

/// (||w~(K)||^2 + sum_up (mu/alpha) e~^2) / (||w~(0)||^2 + sum_up (mu/alpha) n^2)
/// over contiguous records k = 0..K-1. Throws UndefinedRatio when the
/// denominator is zero.
GlobalRatio global_ratio(std::span<const IterationRecord> records, double wtilde_sq_initial);

/// Number of prefixes K (with at least one update so far) at which the
/// global ratio fails to stay below 1, with the strict slack.
std::size_t count_global_violations(std::span<const IterationRecord> records,
                                    double wtilde_sq_initial);

struct MonotonicityStats {
  std::size_t increase_count = 0;
  double increase_fraction = 0.0;
  std::size_t increases_in_transient = 0;
};

MonotonicityStats monotonicity_stats(std::span<const IterationRecord> records);

/// Complementary error function: power series of erf below x = 2.5, Laplace
/// continued fraction above. Absolute error below 1e-14 on [0, 6].
double complementary_error_function(double x);

/// erfc(sqrt(tau / 2)), the probability that a zero-mean Gaussian error with
/// variance sigma^2 exceeds sqrt(tau * sigma^2) in magnitude.
double erfc_bound(double tau);

struct RunVerdict {
  std::size_t total_iterations = 0;
  std::size_t update_count = 0;
  std::size_t local_violations = 0;
  std::size_t global_violations = 0;
  double global_ratio = 1.0;
  bool global_ratio_vacuous = true;
  std::size_t increase_count = 0;
  double increase_fraction = 0.0;
  std::size_t increases_in_transient = 0;
  std::size_t conditional_violations = 0;
  std::size_t decomposition_violations = 0;
  std::optional<double> erfc_bound;
  double update_rate = 0.0;
  double wtilde_sq_initial = 0.0;
  double wtilde_sq_final = 0.0;
};

/// Evaluates every check over a complete run. `tau` is the threshold's
/// tau = gamma^2 / sigma_n^2 when the erfc bound applies.
RunVerdict summarize(std::span<const IterationRecord> records, double wtilde_sq_initial,
                     std::optional<double> tau = std::nullopt);

/// Order-independent merge of per-run verdicts.
struct AggregateVerdict {
  std::size_t runs = 0;
  std::size_t total_iterations = 0;
  std::size_t update_count = 0;
  std::size_t local_violations = 0;
  std::size_t global_violations = 0;
  std::size_t increase_count = 0;
  std::size_t conditional_violations = 0;
  std::size_t decomposition_violations = 0;

  double update_rate() const noexcept;
  double increase_fraction() const noexcept;
};

AggregateVerdict aggregate(std::span<const RunVerdict> verdicts);

/// Flat key=value lines.
void write_summary(std::ostream& os, const RunVerdict& verdict);

}  // namespace dsvnlms
