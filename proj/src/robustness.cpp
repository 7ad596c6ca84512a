#include "dsvnlms/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "dsvnlms/errors.hpp"
#include "dsvnlms/trace_io.hpp"

namespace dsvnlms {

namespace {

double deviation_sq(const KernelVector& w_star, const KernelVector& w) {
  if (w_star.values.size() != w.values.size()) {
    throw DimensionMismatch("true system and estimate have different lengths");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double d = w_star.values[i] - w.values[i];
    acc += d * d;
  }
  return acc;
}

bool strictly_below(double lhs, double rhs) {
  return lhs < rhs + kStrictSlack * std::max(1.0, std::abs(rhs));
}

void require_contiguous(std::span<const IterationRecord> records) {
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].k != records[0].k + i) {
      throw std::invalid_argument("ledger records are not contiguous at row " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

IterationRecord record_iteration(std::size_t k, const KernelVector& w_star,
                                 const KernelVector& w_before, const KernelVector& w_after,
                                 const Regressor& x, const StepOutcome& outcome, double n) {
  if (x.values.size() != w_star.values.size()) {
    throw DimensionMismatch("regressor and true system have different lengths");
  }
  IterationRecord r;
  r.k = k;
  r.e = outcome.e;
  r.n = n;
  r.updated = outcome.updated;
  r.mu_bar = outcome.mu_bar;
  r.alpha = outcome.alpha;
  r.gamma_used = outcome.gamma_used;
  r.transient = outcome.transient;
  r.wtilde_sq_before = deviation_sq(w_star, w_before);
  r.wtilde_sq_after = deviation_sq(w_star, w_after);
  double et = 0.0;
  for (std::size_t i = 0; i < x.values.size(); ++i) {
    et += (w_star.values[i] - w_before.values[i]) * x.values[i];
  }
  r.e_tilde = et;
  r.lhs = r.wtilde_sq_after;
  r.rhs = r.wtilde_sq_before;
  if (r.updated) {
    const double c = r.mu_bar / r.alpha;
    r.lhs += c * r.e_tilde * r.e_tilde;
    r.rhs += c * n * n;
  }
  return r;
}

IterationRecord record_iteration(const KernelVector& w_star, const FilterState& before,
                                 const FilterState& after, const StepOutcome& outcome, double n) {
  return record_iteration(before.iteration(), w_star, before.weights(), after.weights(),
                          after.regressor(), outcome, n);
}

bool check_local(const IterationRecord& r) {
  if (r.updated) return strictly_below(r.lhs, r.rhs);
  return std::abs(r.lhs - r.rhs) <= kEqualityTolerance * std::max(1.0, std::abs(r.rhs));
}

bool check_decomposition(const IterationRecord& r) {
  const double scale = std::max({1.0, std::abs(r.e), std::abs(r.e_tilde), std::abs(r.n)});
  return std::abs(r.e - (r.e_tilde + r.n)) <= kEqualityTolerance * scale;
}

bool check_conditional_improvement(const IterationRecord& r) {
  if (!r.updated) return true;
  if (r.e_tilde * r.e_tilde < r.n * r.n) return true;
  return r.wtilde_sq_after < r.wtilde_sq_before;
}

GlobalRatio global_ratio(std::span<const IterationRecord> records, double wtilde_sq_initial) {
  require_contiguous(records);
  GlobalRatio g;
  g.numerator = records.empty() ? wtilde_sq_initial : records.back().wtilde_sq_after;
  g.denominator = wtilde_sq_initial;
  for (const auto& r : records) {
    if (!r.updated) continue;
    const double c = r.mu_bar / r.alpha;
    g.numerator += c * r.e_tilde * r.e_tilde;
    g.denominator += c * r.n * r.n;
    ++g.updates;
  }
  if (g.denominator == 0.0) {
    throw UndefinedRatio("global ratio denominator is zero");
  }
  g.value = g.numerator / g.denominator;
  return g;
}

std::size_t count_global_violations(std::span<const IterationRecord> records,
                                    double wtilde_sq_initial) {
  require_contiguous(records);
  double err = 0.0;
  double dist = wtilde_sq_initial;
  std::size_t updates = 0;
  std::size_t violations = 0;
  for (const auto& r : records) {
    if (r.updated) {
      const double c = r.mu_bar / r.alpha;
      err += c * r.e_tilde * r.e_tilde;
      dist += c * r.n * r.n;
      ++updates;
    }
    if (updates == 0) continue;
    if (!strictly_below(r.wtilde_sq_after + err, dist)) ++violations;
  }
  return violations;
}

MonotonicityStats monotonicity_stats(std::span<const IterationRecord> records) {
  MonotonicityStats s;
  for (const auto& r : records) {
    if (r.wtilde_sq_after > r.wtilde_sq_before) {
      ++s.increase_count;
      if (r.transient) ++s.increases_in_transient;
    }
  }
  if (!records.empty()) {
    s.increase_fraction = static_cast<double>(s.increase_count) / static_cast<double>(records.size());
  }
  return s;
}

double complementary_error_function(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return 2.0 - complementary_error_function(-x);
  if (x < 2.5) {
    // erf(x) = 2/sqrt(pi) * sum_n (-1)^n x^(2n+1) / (n! (2n+1))
    const double x2 = x * x;
    double power = x;  // (-1)^n x^(2n+1) / n!
    double sum = x;
    for (int n = 1; n < 200; ++n) {
      power *= -x2 / n;
      const double term = power / (2 * n + 1);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return 1.0 - 2.0 / std::sqrt(std::numbers::pi) * sum;
  }
  if (x > 27.0) return 0.0;
  // erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  double t = x;
  for (int n = 120; n >= 1; --n) t = x + 0.5 * n / t;
  return std::exp(-x * x) / std::sqrt(std::numbers::pi) / t;
}

double erfc_bound(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  return complementary_error_function(std::sqrt(tau / 2.0));
}

RunVerdict summarize(std::span<const IterationRecord> records, double wtilde_sq_initial,
                     std::optional<double> tau) {
  RunVerdict v;
  v.total_iterations = records.size();
  v.wtilde_sq_initial = wtilde_sq_initial;
  v.wtilde_sq_final = records.empty() ? wtilde_sq_initial : records.back().wtilde_sq_after;
  for (const auto& r : records) {
    if (r.updated) ++v.update_count;
    if (!check_local(r)) ++v.local_violations;
    if (!check_conditional_improvement(r)) ++v.conditional_violations;
    if (!check_decomposition(r)) ++v.decomposition_violations;
  }
  v.global_violations = count_global_violations(records, wtilde_sq_initial);
  try {
    const GlobalRatio g = global_ratio(records, wtilde_sq_initial);
    v.global_ratio = g.value;
    v.global_ratio_vacuous = g.vacuous();
  } catch (const UndefinedRatio&) {
    v.global_ratio = std::numeric_limits<double>::quiet_NaN();
    v.global_ratio_vacuous = true;
  }
  const MonotonicityStats m = monotonicity_stats(records);
  v.increase_count = m.increase_count;
  v.increase_fraction = m.increase_fraction;
  v.increases_in_transient = m.increases_in_transient;
  if (tau) v.erfc_bound = erfc_bound(*tau);
  if (!records.empty()) {
    v.update_rate = static_cast<double>(v.update_count) / static_cast<double>(records.size());
  }
  return v;
}

double AggregateVerdict::update_rate() const noexcept {
  return total_iterations == 0 ? 0.0
                               : static_cast<double>(update_count) / static_cast<double>(total_iterations);
}

double AggregateVerdict::increase_fraction() const noexcept {
  return total_iterations == 0
             ? 0.0
             : static_cast<double>(increase_count) / static_cast<double>(total_iterations);
}

AggregateVerdict aggregate(std::span<const RunVerdict> verdicts) {
  AggregateVerdict a;
  for (const auto& v : verdicts) {
    ++a.runs;
    a.total_iterations += v.total_iterations;
    a.update_count += v.update_count;
    a.local_violations += v.local_violations;
    a.global_violations += v.global_violations;
    a.increase_count += v.increase_count;
    a.conditional_violations += v.conditional_violations;
    a.decomposition_violations += v.decomposition_violations;
  }
  return a;
}

void write_summary(std::ostream& os, const RunVerdict& v) {
  os << "total_iterations=" << v.total_iterations << '\n'
     << "update_count=" << v.update_count << '\n'
     << "update_rate=" << format_double(v.update_rate) << '\n'
     << "local_violations=" << v.local_violations << '\n'
     << "global_violations=" << v.global_violations << '\n'
     << "global_ratio=" << format_double(v.global_ratio) << '\n'
     << "global_ratio_vacuous=" << (v.global_ratio_vacuous ? 1 : 0) << '\n'
     << "increase_count=" << v.increase_count << '\n'
     << "increase_fraction=" << format_double(v.increase_fraction) << '\n'
     << "increases_in_transient=" << v.increases_in_transient << '\n'
     << "conditional_violations=" << v.conditional_violations << '\n'
     << "decomposition_violations=" << v.decomposition_violations << '\n'
     << "erfc_bound=" << (v.erfc_bound ? format_double(*v.erfc_bound) : std::string("n/a")) << '\n'
     << "wtilde_sq_initial=" << format_double(v.wtilde_sq_initial) << '\n'
     << "wtilde_sq_final=" << format_double(v.wtilde_sq_final) << '\n';
}

}  // namespace dsvnlms
