#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "dsvnlms/volterra.hpp"

namespace dsvnlms {

/// xoshiro256** 1.0 (Blackman & Vigna), seeded by expanding a 64-bit seed
/// through splitmix64. Output is identical on every platform.
class Xoshiro256StarStar {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256StarStar(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

/// Standard normal deviates by the Box-Muller transform. Each pair of
/// uniforms (u1, u2) yields sqrt(-2 ln(1-u1)) * cos(2 pi u2) first and the
/// matching sine term on the following call.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  double next();

 private:
  Xoshiro256StarStar rng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

enum class InputKind { WhiteGaussian, Ar1 };
enum class NoiseKind { Gaussian, UniformBounded };

std::string_view to_string(InputKind kind);
std::string_view to_string(NoiseKind kind);

struct SignalSpec {
  InputKind kind = InputKind::WhiteGaussian;
  double variance = 1.0;         // innovation variance
  double ar_coefficient = 0.95;  // used only for Ar1
  std::uint64_t seed = 1;

  void validate() const;
};

struct NoiseSpec {
  NoiseKind kind = NoiseKind::Gaussian;
  double variance = 0.01;  // sigma_n^2
  double bound = 0.1;      // C, used only for UniformBounded
  std::uint64_t seed = 2;

  void validate() const;
};

/// Variance of the samples actually produced: `variance` for Gaussian noise,
/// C^2/3 for uniform noise on [-C, C].
double effective_variance(const NoiseSpec& spec);

/// Streaming input process. AR(1) starts from x(-1) = 0 with no burn-in.
class InputGenerator {
 public:
  explicit InputGenerator(const SignalSpec& spec);
  double next();

 private:
  SignalSpec spec_;
  GaussianSource gauss_;
  double scale_;
  double previous_ = 0.0;
};

class NoiseGenerator {
 public:
  explicit NoiseGenerator(const NoiseSpec& spec);
  double next();

 private:
  NoiseSpec spec_;
  Xoshiro256StarStar uniform_;
  GaussianSource gauss_;
  double scale_;
};

std::vector<double> generate_input(const SignalSpec& spec, std::size_t length);
std::vector<double> generate_noise(const NoiseSpec& spec, std::size_t length);

/// An unknown system w* together with its layout.
struct Channel {
  KernelVector kernel;
  VolterraConfig config;
};

/// The four-term benchmark system
///   d(k) = -0.76 x(k) + 0.5 x^2(k) + 2 x(k) x(k-2) - 0.5 x^2(k-3) + n(k)
/// with P = 2, N = 3.
Channel benchmark_channel();

/// d(k) = w*^T x(k) + n(k) with a zero-primed delay line.
std::vector<double> desired_signal(const Channel& channel, std::span<const double> input,
                                   std::span<const double> noise);

/// One value per line under a single header row, 17 significant digits.
void write_column_csv(std::ostream& os, std::string_view header, std::span<const double> values);

}  // namespace dsvnlms
