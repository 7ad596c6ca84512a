#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dsvnlms/volterra.hpp"

namespace dsvnlms {

/// Coefficients, delay line and iteration counter of one adaptive Volterra
/// filter. Single owner; mutated sequentially.
class FilterState {
 public:
  /// Null initial kernel and zero-primed delay line.
  explicit FilterState(VolterraConfig config);
  FilterState(VolterraConfig config, KernelVector initial);

  const VolterraConfig& config() const noexcept { return config_; }
  const KernelVector& weights() const noexcept { return w_; }
  std::span<const double> delay_line() const noexcept { return delay_; }
  std::size_t iteration() const noexcept { return k_; }

  /// Shifts the delay line; the newest sample lands at lag 0.
  void push_sample(double x_new);

  Regressor regressor() const { return expand(delay_, config_); }

  /// w += step * x. Used by the update laws below.
  void add_scaled(double step, std::span<const double> x);
  void advance() noexcept { ++k_; }

 private:
  VolterraConfig config_;
  KernelVector w_;
  std::vector<double> delay_;
  std::size_t k_ = 0;
};

inline void push_sample(FilterState& state, double x_new) { state.push_sample(x_new); }

struct StepOutcome {
  double e = 0.0;           // a-priori error d(k) - w^T(k) x(k)
  bool updated = false;     // f(e(k), gamma)
  double mu_bar = 0.0;      // 1 - gamma/|e| when updated (mu for VNLMS), else 0
  double alpha = 0.0;       // x^T x + delta
  double gamma_used = 0.0;  // threshold in force at k
  double y_hat = 0.0;       // w^T(k) x(k)
  bool transient = true;    // detector label at k
};

/// Data-selective update against threshold `gamma` >= 0:
///   e = d - w^T x;  if |e| > gamma: w += ((1 - gamma/|e|) / (x^T x + delta)) e x.
/// The tie |e| == gamma does not update. Throws NumericInputError on a
/// non-finite d or regressor entry, before touching the state.
StepOutcome ds_vnlms_step(FilterState& state, double d, double gamma);

/// Conventional VNLMS: w += (mu / (x^T x + delta)) e x on every sample.
/// mu must lie in (0, 2).
StepOutcome vnlms_step(FilterState& state, double d, double mu);

enum class ThresholdMode { Fixed, TimeVarying };

/// Threshold selection for the data-selective filter.
///
/// In Fixed mode gamma_fixed is used throughout. In TimeVarying mode
/// gamma(k) = sqrt(tau(k) * noise_variance), where tau(k) is tau_transient
/// while the detector reports a transient and tau_steady otherwise. The
/// detector looks at the last `window_length` update flags and reports a
/// transient when the window is not yet full or holds at least
/// `steady_update_threshold` updates.
struct ThresholdPolicy {
  ThresholdMode mode = ThresholdMode::Fixed;
  double gamma_fixed = 0.0;
  double tau_transient = 5.0;
  double tau_steady = 9.0;
  double noise_variance = 0.01;
  std::size_t window_length = 20;
  std::size_t steady_update_threshold = 5;

  static ThresholdPolicy fixed(double gamma);
  /// Fixed gamma = sqrt(tau * noise_variance).
  static ThresholdPolicy fixed_tau(double tau, double noise_variance);
  static ThresholdPolicy time_varying(double tau_transient, double tau_steady,
                                      double noise_variance, std::size_t window_length = 20,
                                      std::size_t steady_update_threshold = 5);

  void validate() const;
};

/// Ring buffer of the most recent update flags.
class UpdateWindow {
 public:
  explicit UpdateWindow(std::size_t capacity);

  void push(bool updated);
  std::size_t count() const noexcept { return count_; }
  std::size_t size() const noexcept { return size_; }
  std::size_t capacity() const noexcept { return flags_.size(); }
  bool full() const noexcept { return size_ == flags_.size(); }

 private:
  std::vector<bool> flags_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  std::size_t count_ = 0;
};

bool is_transient(const ThresholdPolicy& policy, const UpdateWindow& window);
double current_gamma(const ThresholdPolicy& policy, const UpdateWindow& window);

/// Minimal threshold guaranteeing a nonincreasing coefficient deviation when
/// |n(k)| <= bound: returns 2 * bound.
double gamma_for_known_bound(double bound);

/// DS-VNLMS with its threshold detector. step() pushes x(k), evaluates the
/// threshold from the flags of the previous iterations, updates, then records
/// the new flag.
class DataSelectiveFilter {
 public:
  DataSelectiveFilter(VolterraConfig config, ThresholdPolicy policy);

  StepOutcome step(double x_new, double d);

  const FilterState& state() const noexcept { return state_; }
  const ThresholdPolicy& policy() const noexcept { return policy_; }
  const UpdateWindow& window() const noexcept { return window_; }

 private:
  FilterState state_;
  ThresholdPolicy policy_;
  UpdateWindow window_;
};

/// VNLMS baseline. It has no threshold detector, so every outcome carries
/// transient = false.
class VnlmsFilter {
 public:
  VnlmsFilter(VolterraConfig config, double mu);

  StepOutcome step(double x_new, double d);

  const FilterState& state() const noexcept { return state_; }
  double mu() const noexcept { return mu_; }

 private:
  FilterState state_;
  double mu_;
};

}  // namespace dsvnlms
