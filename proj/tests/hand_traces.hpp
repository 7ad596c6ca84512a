#pragma once

// Hand-computed DS-VNLMS traces. The expected numbers below were worked out
// by hand; the runners push the same inputs through the library.

#include <vector>

#include "dsvnlms/filters.hpp"
#include "dsvnlms/robustness.hpp"
#include "dsvnlms/volterra.hpp"

namespace hand {

// Small enough that alpha = x^T x to well below 1e-12 relative.
inline constexpr double kDelta = 1e-15;

struct Expected {
  bool updated;
  double e, e_tilde, mu_bar, alpha, wtilde_sq_before, wtilde_sq_after, lhs, rhs;
};

/// One step: w* = e1, w(0) = 0, x = [1, 0, 0, 0], n = 0, d = 1, gamma = 0.5.
/// A linear-only layout keeps the regressor exactly e1.
inline const Expected kSingleStep{true, 1.0, 1.0, 0.5, 1.0, 1.0, 0.25, 0.75, 1.0};

/// Three steps: P = 1, N = 1, w* = [1, 0.5], inputs 1, 0, 2, zero noise,
/// gamma = 0.5. The middle step is a tie |e| = gamma and must not update.
inline const std::vector<Expected> kThreeStep{
    {true, 1.0, 1.0, 0.5, 1.0, 1.25, 0.5, 1.0, 1.25},
    {false, 0.5, 0.5, 0.0, 1.0, 0.5, 0.5, 0.5, 0.5},
    {true, 1.0, 1.0, 0.5, 4.0, 0.5, 0.3125, 0.4375, 0.5},
};
inline constexpr double kThreeStepInitial = 1.25;
inline constexpr double kThreeStepGlobalRatio = 0.75;
inline const std::vector<double> kThreeStepFinalWeights{0.75, 0.0};

inline std::vector<dsvnlms::IterationRecord> run_single_step(
    dsvnlms::KernelVector* final_weights = nullptr) {
  using namespace dsvnlms;
  const VolterraConfig cfg(1, 3, kDelta);
  KernelVector w_star = KernelVector::zeros(cfg);
  w_star.values[0] = 1.0;
  FilterState state(cfg);
  state.push_sample(1.0);
  const FilterState before = state;
  const StepOutcome out = ds_vnlms_step(state, 1.0, 0.5);
  if (final_weights) *final_weights = state.weights();
  return {record_iteration(w_star, before, state, out, 0.0)};
}

inline std::vector<dsvnlms::IterationRecord> run_three_step(
    dsvnlms::KernelVector* final_weights = nullptr) {
  using namespace dsvnlms;
  const VolterraConfig cfg(1, 1, kDelta);
  const KernelVector w_star{{1.0, 0.5}};
  FilterState state(cfg);
  std::vector<IterationRecord> records;
  for (double x : {1.0, 0.0, 2.0}) {
    state.push_sample(x);
    const double d = predict(w_star, state.regressor());
    const FilterState before = state;
    const StepOutcome out = ds_vnlms_step(state, d, 0.5);
    records.push_back(record_iteration(w_star, before, state, out, 0.0));
  }
  if (final_weights) *final_weights = state.weights();
  return records;
}

inline double rel(double a, double b) {
  const double scale = std::max({1.0, a < 0 ? -a : a, b < 0 ? -b : b});
  return (a > b ? a - b : b - a) / scale;
}

/// True when every field of the record agrees with the expectation to `tol`.
inline bool matches(const dsvnlms::IterationRecord& r, const Expected& x, double tol = 1e-12) {
  return r.updated == x.updated && rel(r.e, x.e) <= tol && rel(r.e_tilde, x.e_tilde) <= tol &&
         rel(r.mu_bar, x.mu_bar) <= tol && rel(r.alpha, x.alpha) <= tol &&
         rel(r.wtilde_sq_before, x.wtilde_sq_before) <= tol &&
         rel(r.wtilde_sq_after, x.wtilde_sq_after) <= tol && rel(r.lhs, x.lhs) <= tol &&
         rel(r.rhs, x.rhs) <= tol;
}

}  // namespace hand
