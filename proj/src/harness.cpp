#include "dsvnlms/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <ostream>
#include <variant>

#include "dsvnlms/errors.hpp"
#include "dsvnlms/trace_io.hpp"

namespace dsvnlms {

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kInputStream = 0;
constexpr std::uint64_t kNoiseStream = 1;

bool same_noise(const NoiseSpec& a, const NoiseSpec& b) {
  if (a.kind != b.kind) return false;
  return a.kind == NoiseKind::Gaussian ? a.variance == b.variance : a.bound == b.bound;
}

template <class F>
void write_file(const fs::path& path, F&& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  body(out);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

void create_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

void write_variant_files(const fs::path& dir, const VariantRun& run,
                         std::span<const IterationRecord> records, std::span<const double> input,
                         std::span<const double> noise, bool dump_signals) {
  create_dirs(dir);
  write_file(dir / "trace.csv", [&](std::ostream& os) { write_trace_csv(os, records); });

  std::vector<double> l(records.size()), r(records.size());
  std::vector<double> dev(records.size() + 1);
  dev[0] = run.verdict.wtilde_sq_initial;
  for (std::size_t k = 0; k < records.size(); ++k) {
    l[k] = records[k].lhs;
    r[k] = records[k].rhs;
    dev[k + 1] = records[k].wtilde_sq_after;
  }
  write_file(dir / "curve_l.csv", [&](std::ostream& os) { write_curve_csv(os, "l", l); });
  write_file(dir / "curve_r.csv", [&](std::ostream& os) { write_curve_csv(os, "r", r); });
  write_file(dir / "curve_wtilde_sq.csv",
             [&](std::ostream& os) { write_curve_csv(os, "wtilde_sq", dev); });
  write_file(dir / "summary.txt", [&](std::ostream& os) {
    os << "variant=" << run.variant << '\n' << "seed=" << run.seed << '\n';
    write_summary(os, run.verdict);
  });
  if (dump_signals) {
    write_file(dir / "input.csv", [&](std::ostream& os) { write_column_csv(os, "x", input); });
    write_file(dir / "noise.csv", [&](std::ostream& os) { write_column_csv(os, "n", noise); });
  }
}

TrialResult run_trial(const ExperimentConfig& config, const Channel& channel, std::uint64_t seed,
                      const RunOptions& options) {
  SignalSpec input_spec = config.input;
  input_spec.seed = derive_seed(seed, kInputStream);
  const std::vector<double> input = generate_input(input_spec, config.iterations);

  // One realization per distinct noise spec, shared by the variants using it.
  std::vector<std::pair<NoiseSpec, std::vector<double>>> noises;
  auto noise_for = [&](const NoiseSpec& spec) -> const std::vector<double>& {
    for (const auto& [s, v] : noises) {
      if (same_noise(s, spec)) return v;
    }
    NoiseSpec seeded = spec;
    seeded.seed = derive_seed(seed, kNoiseStream);
    noises.emplace_back(spec, generate_noise(seeded, config.iterations));
    return noises.back().second;
  };

  TrialResult trial;
  trial.seed = seed;
  for (const auto& algorithm : config.algorithms) {
    const auto& noise = noise_for(config.noise_for(algorithm));
    VariantRun run = run_variant(algorithm, channel, input, noise, seed);
    if (options.write_files) {
      write_variant_files(config.output_dir / algorithm.name / ("seed_" + std::to_string(seed)),
                          run, run.records, input, noise, config.dump_signals);
    }
    if (!options.keep_records) {
      run.records.clear();
      run.records.shrink_to_fit();
    }
    trial.variants.push_back(std::move(run));
  }
  return trial;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t trial_seed, std::uint64_t stream) {
  std::uint64_t state = trial_seed ^ (stream * 0xD1B54A32D192ED03ULL);
  return splitmix64(state);
}

std::optional<double> threshold_tau(const AlgorithmSpec& algorithm) {
  if (algorithm.kind != AlgorithmKind::DsVnlms) return std::nullopt;
  const ThresholdPolicy& p = algorithm.policy;
  if (p.mode == ThresholdMode::TimeVarying) return p.tau_transient;
  if (!(p.gamma_fixed > 0.0) || !(p.noise_variance > 0.0)) return std::nullopt;
  if (algorithm.threshold_source == ThresholdSource::Tau) return p.tau_transient;
  return p.gamma_fixed * p.gamma_fixed / p.noise_variance;
}

VariantRun run_variant(const AlgorithmSpec& algorithm, const Channel& channel,
                       std::span<const double> input, std::span<const double> noise,
                       std::uint64_t seed) {
  const std::vector<double> d = desired_signal(channel, input, noise);

  std::variant<DataSelectiveFilter, VnlmsFilter> filter =
      algorithm.kind == AlgorithmKind::DsVnlms
          ? std::variant<DataSelectiveFilter, VnlmsFilter>(
                std::in_place_type<DataSelectiveFilter>, channel.config, algorithm.policy)
          : std::variant<DataSelectiveFilter, VnlmsFilter>(std::in_place_type<VnlmsFilter>,
                                                           channel.config, algorithm.mu);

  VariantRun run;
  run.variant = algorithm.name;
  run.seed = seed;
  run.records.reserve(input.size());
  const double wtilde_sq_initial = std::visit(
      [&](auto& f) {
        double acc = 0.0;
        for (std::size_t i = 0; i < channel.kernel.values.size(); ++i) {
          const double dv = channel.kernel.values[i] - f.state().weights().values[i];
          acc += dv * dv;
        }
        return acc;
      },
      filter);

  std::visit(
      [&](auto& f) {
        KernelVector before = f.state().weights();
        for (std::size_t k = 0; k < input.size(); ++k) {
          const StepOutcome out = f.step(input[k], d[k]);
          run.records.push_back(record_iteration(k, channel.kernel, before, f.state().weights(),
                                                 f.state().regressor(), out, noise[k]));
          before = f.state().weights();
        }
      },
      filter);

  run.verdict = summarize(run.records, wtilde_sq_initial, threshold_tau(algorithm));
  return run;
}

std::vector<RunVerdict> ExperimentResult::verdicts(const std::string& variant) const {
  std::vector<RunVerdict> out;
  for (const auto& t : trials) {
    for (const auto& v : t.variants) {
      if (v.variant == variant) out.push_back(v.verdict);
    }
  }
  return out;
}

AggregateVerdict ExperimentResult::aggregate(const std::string& variant) const {
  const auto v = verdicts(variant);
  return dsvnlms::aggregate(v);
}

std::vector<std::string> ExperimentResult::variant_names() const {
  std::vector<std::string> names;
  if (!trials.empty()) {
    for (const auto& v : trials.front().variants) names.push_back(v.variant);
  }
  return names;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  config.validate();
  const Channel channel = resolve_channel(config);
  if (options.write_files) create_dirs(config.output_dir);

  ExperimentResult result;
  result.name = config.name;
  if (options.parallel) {
    std::vector<std::future<TrialResult>> futures;
    for (auto seed : config.seeds) {
      futures.push_back(std::async(std::launch::async, run_trial, std::cref(config),
                                   std::cref(channel), seed, std::cref(options)));
    }
    for (auto& f : futures) result.trials.push_back(f.get());
  } else {
    for (auto seed : config.seeds) result.trials.push_back(run_trial(config, channel, seed, options));
  }

  if (options.write_files) {
    const ComparisonSummary summary = compare(result);
    write_file(config.output_dir / "comparison.csv",
               [&](std::ostream& os) { write_comparison_csv(os, summary); });
  }
  return result;
}

const ComparisonRow& ComparisonSummary::row(std::uint64_t seed, const std::string& variant) const {
  auto it = std::find_if(rows.begin(), rows.end(), [&](const ComparisonRow& r) {
    return r.seed == seed && r.variant == variant;
  });
  if (it == rows.end()) throw std::out_of_range("no comparison row for " + variant);
  return *it;
}

ComparisonSummary compare(const ExperimentResult& result) {
  ComparisonSummary s;
  for (const auto& t : result.trials) {
    for (const auto& v : t.variants) {
      s.rows.push_back(ComparisonRow{t.seed, v.variant, v.verdict.update_rate,
                                     v.verdict.increase_fraction, v.verdict.increase_count,
                                     v.verdict.wtilde_sq_final, v.verdict.local_violations});
    }
  }
  return s;
}

ComparisonSummary compare_algorithms(const ExperimentConfig& config, const RunOptions& options) {
  return compare(run_experiment(config, options));
}

void write_comparison_csv(std::ostream& os, const ComparisonSummary& summary) {
  os << "seed,variant,update_rate,increase_count,increase_fraction,final_wtilde_sq,"
        "local_violations\n";
  for (const auto& r : summary.rows) {
    os << r.seed << ',' << r.variant << ',' << format_double(r.update_rate) << ','
       << r.increase_count << ',' << format_double(r.increase_fraction) << ','
       << format_double(r.final_wtilde_sq) << ',' << r.local_violations << '\n';
  }
}

}  // namespace dsvnlms
