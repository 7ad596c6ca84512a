#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dsvnlms/filters.hpp"
#include "dsvnlms/signals.hpp"
#include "dsvnlms/volterra.hpp"

namespace dsvnlms {

inline constexpr int kConfigSchemaVersion = 1;

enum class AlgorithmKind { DsVnlms, Vnlms };

/// How a fixed threshold was specified; kept so the erfc bound can be
/// reported against the right tau.
enum class ThresholdSource { Gamma, Tau, KnownBound, TimeVarying };

struct AlgorithmSpec {
  std::string name;
  AlgorithmKind kind = AlgorithmKind::DsVnlms;
  ThresholdPolicy policy;
  ThresholdSource threshold_source = ThresholdSource::Gamma;
  double mu = 0.0;
  /// Replaces the experiment noise for this variant. Variants with equal
  /// effective noise specs see identical noise realizations.
  std::optional<NoiseSpec> noise;
};

struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string name;
  VolterraConfig volterra{3, 3};
  /// Empty: the built-in benchmark channel. Otherwise a kernel JSON file.
  std::filesystem::path kernel_file;
  SignalSpec input;
  NoiseSpec noise;
  std::vector<AlgorithmSpec> algorithms;
  std::size_t iterations = 2500;
  std::vector<std::uint64_t> seeds{1};
  std::filesystem::path output_dir = "out";
  bool dump_signals = false;

  /// Throws ConfigError naming every offending field.
  void validate() const;

  NoiseSpec noise_for(const AlgorithmSpec& algorithm) const {
    return algorithm.noise.value_or(noise);
  }
};

/// Seeds base, base+1, ..., base+trials-1.
std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, std::size_t trials);

/// Relative kernel_file paths resolve against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& doc,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Kernel file: {"order": P, "memory": N, "terms": [{"lags": [...], "value": v}, ...]}.
Channel load_channel(const std::filesystem::path& path);
Channel parse_channel(const nlohmann::json& doc);

/// The channel an experiment identifies, embedded in its filter layout.
Channel resolve_channel(const ExperimentConfig& config);

/// Built-in scenarios: fig1a, fig1b, fig2a, fig2b, fig5, fig6.
std::vector<std::string> preset_names();
std::string preset_description(std::string_view name);
ExperimentConfig builtin_preset(std::string_view name);
/// The preset as a config document, as shipped under presets/.
nlohmann::json preset_json(std::string_view name);

}  // namespace dsvnlms
