#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dsvnlms/config.hpp"
#include "dsvnlms/robustness.hpp"

namespace dsvnlms {

/// Per-trial signal streams. Input and noise seeds are derived from the
/// trial seed so that every variant in a trial sees the same realizations.
std::uint64_t derive_seed(std::uint64_t trial_seed, std::uint64_t stream);

struct VariantRun {
  std::string variant;
  std::uint64_t seed = 0;
  RunVerdict verdict;
  std::vector<IterationRecord> records;  // empty unless RunOptions::keep_records
};

struct TrialResult {
  std::uint64_t seed = 0;
  std::vector<VariantRun> variants;
};

struct ExperimentResult {
  std::string name;
  std::vector<TrialResult> trials;

  std::vector<RunVerdict> verdicts(const std::string& variant) const;
  AggregateVerdict aggregate(const std::string& variant) const;
  std::vector<std::string> variant_names() const;
};

struct RunOptions {
  bool write_files = true;
  bool keep_records = false;
  /// Run trials on separate threads. Output is identical either way.
  bool parallel = false;
};

/// tau = gamma^2 / sigma_n^2 for a fixed threshold, tau_transient for a
/// time-varying one, nothing for VNLMS.
std::optional<double> threshold_tau(const AlgorithmSpec& algorithm);

/// Streams one realization through one variant and builds its ledger.
VariantRun run_variant(const AlgorithmSpec& algorithm, const Channel& channel,
                       std::span<const double> input, std::span<const double> noise,
                       std::uint64_t seed);

/// Runs every (trial, variant) pair. With write_files, each pair writes
///   <output_dir>/<variant>/seed_<seed>/{trace.csv, curve_l.csv, curve_r.csv,
///                                       curve_wtilde_sq.csv, summary.txt}
/// plus input.csv and noise.csv when dump_signals is set, and the experiment
/// writes <output_dir>/comparison.csv. Throws IoError on write failure.
ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

struct ComparisonRow {
  std::uint64_t seed = 0;
  std::string variant;
  double update_rate = 0.0;
  double increase_fraction = 0.0;
  std::size_t increase_count = 0;
  double final_wtilde_sq = 0.0;
  std::size_t local_violations = 0;
};

struct ComparisonSummary {
  std::vector<ComparisonRow> rows;

  const ComparisonRow& row(std::uint64_t seed, const std::string& variant) const;
};

ComparisonSummary compare(const ExperimentResult& result);

/// run_experiment followed by the side-by-side comparison table.
ComparisonSummary compare_algorithms(const ExperimentConfig& config,
                                     const RunOptions& options = {});

void write_comparison_csv(std::ostream& os, const ComparisonSummary& summary);

}  // namespace dsvnlms
