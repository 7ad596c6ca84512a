#pragma once

// Brute-force references used only by the tests. Nothing here calls into the
// library's indexing or update code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracle {

/// Every nondecreasing lag tuple of length p over [0, memory], generated by
/// nested recursion in lexicographic order.
inline std::vector<std::vector<int>> lag_tuples(int p, int memory) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int lo) {
    if (static_cast<int>(cur.size()) == p) {
      out.push_back(cur);
      return;
    }
    for (int l = lo; l <= memory; ++l) {
      cur.push_back(l);
      rec(l);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

/// All terms for orders 1..order, blocks in ascending order.
inline std::vector<std::vector<int>> all_terms(int order, int memory) {
  std::vector<std::vector<int>> out;
  for (int p = 1; p <= order; ++p) {
    auto block = lag_tuples(p, memory);
    out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

inline std::size_t dimension(int order, int memory) { return all_terms(order, memory).size(); }

inline std::vector<double> expand(const std::vector<double>& delay, int order, int memory) {
  std::vector<double> out;
  for (const auto& t : all_terms(order, memory)) {
    double prod = 1.0;
    for (int l : t) prod *= delay[static_cast<std::size_t>(l)];
    out.push_back(prod);
  }
  return out;
}

/// Straight-line DS-NLMS step on plain vectors. Returns true when updated.
inline bool ds_step(std::vector<double>& w, const std::vector<double>& x, double d, double gamma,
                    double delta, double* e_out = nullptr, double* mu_out = nullptr,
                    double* alpha_out = nullptr) {
  double y = 0.0, xx = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    y += w[i] * x[i];
    xx += x[i] * x[i];
  }
  const double e = d - y;
  const double alpha = xx + delta;
  if (e_out) *e_out = e;
  if (alpha_out) *alpha_out = alpha;
  if (!(std::fabs(e) > gamma)) {
    if (mu_out) *mu_out = 0.0;
    return false;
  }
  const double mu = 1.0 - gamma / std::fabs(e);
  if (mu_out) *mu_out = mu;
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += mu / alpha * e * x[i];
  return true;
}

inline double rel_err(double a, double b) {
  const double scale = std::max({1e-300, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) / scale;
}

}  // namespace oracle
