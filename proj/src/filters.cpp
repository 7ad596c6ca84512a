#include "dsvnlms/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dsvnlms/errors.hpp"

namespace dsvnlms {

namespace {

struct Prepared {
  Regressor x;
  double y_hat;
  double e;
  double alpha;
};

Prepared prepare(const FilterState& state, double d) {
  if (!std::isfinite(d)) throw NumericInputError("desired sample is not finite");
  Prepared p;
  p.x = state.regressor();
  if (!std::all_of(p.x.values.begin(), p.x.values.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw NumericInputError("regressor has non-finite entries");
  }
  p.y_hat = predict(state.weights(), p.x);
  p.e = d - p.y_hat;
  p.alpha = squared_norm(p.x.values) + state.config().regularization();
  return p;
}

}  // namespace

FilterState::FilterState(VolterraConfig config)
    : config_(config), w_(KernelVector::zeros(config)), delay_(config.taps(), 0.0) {}

FilterState::FilterState(VolterraConfig config, KernelVector initial)
    : config_(config), w_(std::move(initial)), delay_(config.taps(), 0.0) {
  if (w_.values.size() != config_.dimension()) {
    throw DimensionMismatch("initial kernel has " + std::to_string(w_.values.size()) +
                            " entries, layout needs " + std::to_string(config_.dimension()));
  }
}

void FilterState::push_sample(double x_new) {
  if (!std::isfinite(x_new)) throw NumericInputError("input sample is not finite");
  std::shift_right(delay_.begin(), delay_.end(), 1);
  delay_[0] = x_new;
}

void FilterState::add_scaled(double step, std::span<const double> x) {
  if (x.size() != w_.values.size()) {
    throw DimensionMismatch("update direction does not match kernel length");
  }
  for (std::size_t i = 0; i < x.size(); ++i) w_.values[i] += step * x[i];
}

StepOutcome ds_vnlms_step(FilterState& state, double d, double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw NumericInputError("threshold must be finite and >= 0");
  }
  const Prepared p = prepare(state, d);
  StepOutcome out;
  out.e = p.e;
  out.y_hat = p.y_hat;
  out.alpha = p.alpha;
  out.gamma_used = gamma;
  out.updated = std::abs(p.e) > gamma;
  if (out.updated) {
    out.mu_bar = 1.0 - gamma / std::abs(p.e);
    state.add_scaled(out.mu_bar / p.alpha * p.e, p.x.values);
  }
  state.advance();
  return out;
}

StepOutcome vnlms_step(FilterState& state, double d, double mu) {
  if (!(mu > 0.0 && mu < 2.0)) throw ConfigError({"vnlms step size must lie in (0, 2)"});
  const Prepared p = prepare(state, d);
  StepOutcome out;
  out.e = p.e;
  out.y_hat = p.y_hat;
  out.alpha = p.alpha;
  out.updated = true;
  out.mu_bar = mu;
  state.add_scaled(mu / p.alpha * p.e, p.x.values);
  state.advance();
  return out;
}

ThresholdPolicy ThresholdPolicy::fixed(double gamma) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::Fixed;
  p.gamma_fixed = gamma;
  p.validate();
  return p;
}

ThresholdPolicy ThresholdPolicy::fixed_tau(double tau, double noise_variance) {
  ThresholdPolicy p = fixed(std::sqrt(tau * noise_variance));
  p.tau_transient = tau;
  p.noise_variance = noise_variance;
  return p;
}

ThresholdPolicy ThresholdPolicy::time_varying(double tau_transient, double tau_steady,
                                              double noise_variance, std::size_t window_length,
                                              std::size_t steady_update_threshold) {
  ThresholdPolicy p;
  p.mode = ThresholdMode::TimeVarying;
  p.tau_transient = tau_transient;
  p.tau_steady = tau_steady;
  p.noise_variance = noise_variance;
  p.window_length = window_length;
  p.steady_update_threshold = steady_update_threshold;
  p.gamma_fixed = std::sqrt(tau_transient * noise_variance);
  p.validate();
  return p;
}

void ThresholdPolicy::validate() const {
  std::vector<std::string> bad;
  if (window_length == 0) bad.push_back("threshold.window_length must be >= 1");
  if (steady_update_threshold == 0) bad.push_back("threshold.steady_update_threshold must be >= 1");
  if (mode == ThresholdMode::Fixed) {
    if (!(gamma_fixed >= 0.0) || !std::isfinite(gamma_fixed)) {
      bad.push_back("threshold.gamma must be finite and >= 0");
    }
  } else {
    if (!(tau_transient >= 1.0 && tau_transient <= 5.0)) {
      bad.push_back("threshold.tau_transient must lie in [1, 5]");
    }
    if (!(tau_steady >= 5.0 && tau_steady <= 9.0)) {
      bad.push_back("threshold.tau_steady must lie in [5, 9]");
    }
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance)) {
      bad.push_back("threshold.noise_variance must be > 0");
    }
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

UpdateWindow::UpdateWindow(std::size_t capacity) : flags_(capacity, false) {
  if (capacity == 0) throw ConfigError({"update window length must be >= 1"});
}

void UpdateWindow::push(bool updated) {
  if (full()) {
    if (flags_[head_]) --count_;
  } else {
    ++size_;
  }
  flags_[head_] = updated;
  if (updated) ++count_;
  head_ = (head_ + 1) % flags_.size();
}

bool is_transient(const ThresholdPolicy& policy, const UpdateWindow& window) {
  return !window.full() || window.count() >= policy.steady_update_threshold;
}

double current_gamma(const ThresholdPolicy& policy, const UpdateWindow& window) {
  if (policy.mode == ThresholdMode::Fixed) return policy.gamma_fixed;
  const double tau = is_transient(policy, window) ? policy.tau_transient : policy.tau_steady;
  return std::sqrt(tau * policy.noise_variance);
}

double gamma_for_known_bound(double bound) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw ConfigError({"noise bound must be finite and > 0"});
  }
  return 2.0 * bound;
}

DataSelectiveFilter::DataSelectiveFilter(VolterraConfig config, ThresholdPolicy policy)
    : state_(config), policy_(policy), window_(policy.window_length) {
  policy_.validate();
}

StepOutcome DataSelectiveFilter::step(double x_new, double d) {
  if (!std::isfinite(d)) throw NumericInputError("desired sample is not finite");
  state_.push_sample(x_new);
  const bool transient = is_transient(policy_, window_);
  StepOutcome out = ds_vnlms_step(state_, d, current_gamma(policy_, window_));
  out.transient = transient;
  window_.push(out.updated);
  return out;
}

VnlmsFilter::VnlmsFilter(VolterraConfig config, double mu) : state_(config), mu_(mu) {
  if (!(mu > 0.0 && mu < 2.0)) throw ConfigError({"vnlms step size must lie in (0, 2)"});
}

StepOutcome VnlmsFilter::step(double x_new, double d) {
  if (!std::isfinite(d)) throw NumericInputError("desired sample is not finite");
  state_.push_sample(x_new);
  StepOutcome out = vnlms_step(state_, d, mu_);
  out.transient = false;
  return out;
}

}  // namespace dsvnlms
