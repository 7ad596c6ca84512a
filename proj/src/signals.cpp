#include "dsvnlms/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <string>

#include "dsvnlms/errors.hpp"
#include "dsvnlms/trace_io.hpp"

namespace dsvnlms {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Xoshiro256StarStar::Xoshiro256StarStar(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

Xoshiro256StarStar::result_type Xoshiro256StarStar::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Xoshiro256StarStar::uniform01() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double GaussianSource::next() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  const double u1 = rng_.uniform01();
  const double u2 = rng_.uniform01();
  // 1 - u1 lies in (0, 1], so the logarithm is finite.
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  cached_ = radius * std::sin(angle);
  has_cached_ = true;
  return radius * std::cos(angle);
}

std::string_view to_string(InputKind kind) {
  return kind == InputKind::Ar1 ? "ar1" : "white_gaussian";
}

std::string_view to_string(NoiseKind kind) {
  return kind == NoiseKind::UniformBounded ? "uniform_bounded" : "gaussian";
}

void SignalSpec::validate() const {
  std::vector<std::string> bad;
  if (!(variance > 0.0) || !std::isfinite(variance)) bad.push_back("input.variance must be > 0");
  if (kind == InputKind::Ar1 && !(std::abs(ar_coefficient) < 1.0)) {
    bad.push_back("input.ar_coefficient must lie in (-1, 1)");
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

void NoiseSpec::validate() const {
  std::vector<std::string> bad;
  if (kind == NoiseKind::Gaussian && (!(variance > 0.0) || !std::isfinite(variance))) {
    bad.push_back("noise.variance must be > 0");
  }
  if (kind == NoiseKind::UniformBounded && (!(bound > 0.0) || !std::isfinite(bound))) {
    bad.push_back("noise.bound must be > 0");
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

double effective_variance(const NoiseSpec& spec) {
  return spec.kind == NoiseKind::UniformBounded ? spec.bound * spec.bound / 3.0 : spec.variance;
}

InputGenerator::InputGenerator(const SignalSpec& spec)
    : spec_(spec), gauss_(spec.seed), scale_(std::sqrt(spec.variance)) {
  spec_.validate();
}

double InputGenerator::next() {
  const double innovation = scale_ * gauss_.next();
  if (spec_.kind == InputKind::WhiteGaussian) return innovation;
  previous_ = spec_.ar_coefficient * previous_ + innovation;
  return previous_;
}

NoiseGenerator::NoiseGenerator(const NoiseSpec& spec)
    : spec_(spec), uniform_(spec.seed), gauss_(spec.seed), scale_(std::sqrt(spec.variance)) {
  spec_.validate();
}

double NoiseGenerator::next() {
  if (spec_.kind == NoiseKind::Gaussian) return scale_ * gauss_.next();
  // 2u - 1 is in [-1, 1); clamp guards the product against rounding past C.
  const double v = spec_.bound * (2.0 * uniform_.uniform01() - 1.0);
  return std::clamp(v, -spec_.bound, spec_.bound);
}

std::vector<double> generate_input(const SignalSpec& spec, std::size_t length) {
  InputGenerator gen(spec);
  std::vector<double> out(length);
  for (auto& v : out) v = gen.next();
  return out;
}

std::vector<double> generate_noise(const NoiseSpec& spec, std::size_t length) {
  NoiseGenerator gen(spec);
  std::vector<double> out(length);
  for (auto& v : out) v = gen.next();
  return out;
}

Channel benchmark_channel() {
  VolterraConfig config(2, 3);
  KernelVector w = KernelVector::zeros(config);
  w.values[position_of({{0}}, config)] = -0.76;
  w.values[position_of({{0, 0}}, config)] = 0.5;
  w.values[position_of({{0, 2}}, config)] = 2.0;
  w.values[position_of({{3, 3}}, config)] = -0.5;
  return Channel{std::move(w), config};
}

std::vector<double> desired_signal(const Channel& channel, std::span<const double> input,
                                   std::span<const double> noise) {
  if (input.size() != noise.size()) {
    throw DimensionMismatch("input has " + std::to_string(input.size()) +
                            " samples but noise has " + std::to_string(noise.size()));
  }
  if (channel.kernel.values.size() != channel.config.dimension()) {
    throw DimensionMismatch("channel kernel does not match its layout");
  }
  std::vector<double> delay(channel.config.taps(), 0.0);
  std::vector<double> x;
  std::vector<double> d(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    for (std::size_t i = delay.size() - 1; i > 0; --i) delay[i] = delay[i - 1];
    delay[0] = input[k];
    expand_into(delay, channel.config, x);
    d[k] = dot(channel.kernel.values, x) + noise[k];
  }
  return d;
}

void write_column_csv(std::ostream& os, std::string_view header, std::span<const double> values) {
  os << header << '\n';
  for (double v : values) os << format_double(v) << '\n';
}

}  // namespace dsvnlms
