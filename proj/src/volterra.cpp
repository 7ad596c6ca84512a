#include "dsvnlms/volterra.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "dsvnlms/errors.hpp"

namespace dsvnlms {

namespace {

std::size_t checked_add(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw IndexOverflow("Volterra layout size overflows std::size_t");
  }
  return out;
}

// Nondecreasing tuples of length `len` drawn from [first, memory].
std::size_t tail_count(int memory, int first, int len) {
  return checked_binomial(static_cast<std::size_t>(memory - first + len),
                          static_cast<std::size_t>(len));
}

void validate_term(const TermIndex& term, const VolterraConfig& config) {
  if (term.order() < 1 || term.order() > config.order()) {
    throw InvalidTerm("term order " + std::to_string(term.order()) +
                      " outside [1, " + std::to_string(config.order()) + "]");
  }
  int prev = 0;
  for (int lag : term.lags) {
    if (lag < 0 || lag > config.memory()) {
      throw InvalidTerm("lag " + std::to_string(lag) + " outside [0, " +
                        std::to_string(config.memory()) + "]");
    }
    if (lag < prev) {
      throw InvalidTerm("lags must be nondecreasing");
    }
    prev = lag;
  }
}

}  // namespace

std::size_t checked_binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  // result * (n - k + i) / i is integral at every step. Dividing out
  // g = gcd(result, i) first leaves i / g dividing (n - k + i) exactly.
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t g = std::gcd(result, i);
    const std::size_t factor = (n - k + i) / (i / g);
    if (__builtin_mul_overflow(result / g, factor, &result)) {
      throw IndexOverflow("binomial coefficient overflows std::size_t");
    }
  }
  return result;
}

VolterraConfig::VolterraConfig(int order, int memory, double regularization)
    : order_(order), memory_(memory), regularization_(regularization), dimension_(0) {
  std::vector<std::string> bad;
  if (order < 1) bad.push_back("order must be >= 1 (got " + std::to_string(order) + ")");
  if (memory < 0) bad.push_back("memory must be >= 0 (got " + std::to_string(memory) + ")");
  if (!(regularization > 0.0) || !std::isfinite(regularization)) {
    bad.push_back("regularization must be finite and > 0");
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
  dimension_ = block_offset(order + 1);
}

std::size_t VolterraConfig::block_offset(int p) const {
  if (p < 1 || p > order_ + 1) {
    throw InvalidTerm("block order " + std::to_string(p) + " outside [1, " +
                      std::to_string(order_ + 1) + "]");
  }
  std::size_t offset = 0;
  for (int q = 1; q < p; ++q) {
    offset = checked_add(offset, tail_count(memory_, 0, q));
  }
  return offset;
}

std::size_t total_dimension(const VolterraConfig& config) { return config.dimension(); }

std::size_t position_of(const TermIndex& term, const VolterraConfig& config) {
  validate_term(term, config);
  const int p = term.order();
  std::size_t pos = config.block_offset(p);
  int prev = 0;
  for (int i = 0; i < p; ++i) {
    const int remaining = p - i - 1;
    for (int v = prev; v < term.lags[i]; ++v) {
      pos += tail_count(config.memory(), v, remaining);
    }
    prev = term.lags[i];
  }
  return pos;
}

TermIndex term_at(std::size_t position, const VolterraConfig& config) {
  if (position >= config.dimension()) {
    throw InvalidTerm("position " + std::to_string(position) + " outside layout of size " +
                      std::to_string(config.dimension()));
  }
  int p = 1;
  while (config.block_offset(p + 1) <= position) ++p;
  std::size_t rank = position - config.block_offset(p);

  TermIndex term;
  term.lags.reserve(static_cast<std::size_t>(p));
  int v = 0;
  for (int i = 0; i < p; ++i) {
    const int remaining = p - i - 1;
    for (;; ++v) {
      const std::size_t c = tail_count(config.memory(), v, remaining);
      if (rank < c) break;
      rank -= c;
    }
    term.lags.push_back(v);
  }
  return term;
}

std::vector<TermIndex> layout(const VolterraConfig& config) {
  std::vector<TermIndex> terms;
  terms.reserve(config.dimension());
  const int n = config.memory();
  for (int p = 1; p <= config.order(); ++p) {
    std::vector<int> lags(static_cast<std::size_t>(p), 0);
    for (;;) {
      terms.push_back(TermIndex{lags});
      int i = p - 1;
      while (i >= 0 && lags[i] == n) --i;
      if (i < 0) break;
      ++lags[i];
      for (int j = i + 1; j < p; ++j) lags[j] = lags[i];
    }
  }
  return terms;
}

void expand_into(std::span<const double> delay_line, const VolterraConfig& config,
                 std::vector<double>& out) {
  if (delay_line.size() != config.taps()) {
    throw DimensionMismatch("delay line has " + std::to_string(delay_line.size()) +
                            " samples, expected " + std::to_string(config.taps()));
  }
  out.resize(config.dimension());
  const int n = config.memory();
  std::size_t pos = 0;
  std::vector<int> lags;
  // prefix[i] = product of the first i factors of the current tuple.
  std::vector<double> prefix;
  for (int p = 1; p <= config.order(); ++p) {
    lags.assign(static_cast<std::size_t>(p), 0);
    prefix.assign(static_cast<std::size_t>(p) + 1, 1.0);
    int dirty = 0;
    for (;;) {
      for (int i = dirty; i < p; ++i) prefix[i + 1] = prefix[i] * delay_line[lags[i]];
      out[pos++] = prefix[p];
      int i = p - 1;
      while (i >= 0 && lags[i] == n) --i;
      if (i < 0) break;
      ++lags[i];
      for (int j = i + 1; j < p; ++j) lags[j] = lags[i];
      dirty = i;
    }
  }
}

Regressor expand(std::span<const double> delay_line, const VolterraConfig& config) {
  Regressor x;
  expand_into(delay_line, config, x.values);
  return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("inner product of vectors with lengths " +
                            std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return acc;
}

double predict(const KernelVector& w, const Regressor& x) { return dot(w.values, x.values); }

KernelVector embed(const KernelVector& w, const VolterraConfig& from, const VolterraConfig& to) {
  if (w.values.size() != from.dimension()) {
    throw DimensionMismatch("kernel length does not match its source layout");
  }
  if (from.order() > to.order() || from.memory() > to.memory()) {
    throw DimensionMismatch("target layout cannot hold every source term");
  }
  if (from.order() == to.order() && from.memory() == to.memory()) return w;
  KernelVector out = KernelVector::zeros(to);
  const auto terms = layout(from);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    out.values[position_of(terms[i], to)] = w.values[i];
  }
  return out;
}

}  // namespace dsvnlms
