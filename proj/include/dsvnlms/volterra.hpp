#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dsvnlms {

/// Truncated Volterra filter geometry.
///
/// `order` is the highest monomial degree P, `memory` is N (the delay line
/// holds x(k) ... x(k-N)), and `regularization` is the delta added to the
/// regressor energy in the NLMS normalization. The constant kernel w0 is
/// never represented, so the flattened layout holds
/// sum_{p=1..P} C(N+p, p) entries.
class VolterraConfig {
 public:
  static constexpr double kDefaultRegularization = 1e-9;

  /// Throws ConfigError on order < 1, memory < 0 or regularization <= 0, and
  /// IndexOverflow when the layout size does not fit in std::size_t.
  VolterraConfig(int order, int memory,
                 double regularization = kDefaultRegularization);

  int order() const noexcept { return order_; }
  int memory() const noexcept { return memory_; }
  double regularization() const noexcept { return regularization_; }

  /// Number of taps in the delay line (N + 1).
  std::size_t taps() const noexcept { return static_cast<std::size_t>(memory_) + 1; }

  /// Length of the regressor and kernel vectors.
  std::size_t dimension() const noexcept { return dimension_; }

  /// First flat position of the order-p block, p in [1, order + 1].
  std::size_t block_offset(int p) const;

  bool operator==(const VolterraConfig&) const = default;

 private:
  int order_;
  int memory_;
  double regularization_;
  std::size_t dimension_;
};

/// C(n, k) with overflow detection.
std::size_t checked_binomial(std::size_t n, std::size_t k);

/// sum_{p=1..P} C(N+p, p).
std::size_t total_dimension(const VolterraConfig& config);

/// One monomial x(k-l1) * ... * x(k-lp) with l1 <= ... <= lp.
struct TermIndex {
  std::vector<int> lags;

  int order() const noexcept { return static_cast<int>(lags.size()); }
  bool operator==(const TermIndex&) const = default;
};

/// Flat position of `term` under the canonical ordering: blocks by ascending
/// order, lexicographic lag tuples inside a block.
std::size_t position_of(const TermIndex& term, const VolterraConfig& config);

/// Inverse of position_of.
TermIndex term_at(std::size_t position, const VolterraConfig& config);

/// Every term in canonical order.
std::vector<TermIndex> layout(const VolterraConfig& config);

struct Regressor {
  std::vector<double> values;
};

struct KernelVector {
  std::vector<double> values;

  static KernelVector zeros(const VolterraConfig& config) {
    return KernelVector{std::vector<double>(config.dimension(), 0.0)};
  }
};

/// Expands delay_line (delay_line[i] = x(k-i), length N+1) into the
/// regressor of all monomials up to order P.
Regressor expand(std::span<const double> delay_line, const VolterraConfig& config);

/// Writes the expansion into `out` (resized as needed).
void expand_into(std::span<const double> delay_line, const VolterraConfig& config,
                 std::vector<double>& out);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> v);

/// w^T x.
double predict(const KernelVector& w, const Regressor& x);

/// Re-indexes a kernel laid out for `from` into the layout of `to`. Requires
/// from.order() <= to.order() and from.memory() <= to.memory(); terms absent
/// from `from` are zero.
KernelVector embed(const KernelVector& w, const VolterraConfig& from,
                   const VolterraConfig& to);

}  // namespace dsvnlms
