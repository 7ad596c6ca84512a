// dsvnlms: run robustness experiments, list presets, re-check traces and
// print regressor layouts.
//
// Exit codes: 0 success, 1 usage/config error, 2 I/O error, 3 verification
// failure (check).

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "dsvnlms/config.hpp"
#include "dsvnlms/errors.hpp"
#include "dsvnlms/harness.hpp"
#include "dsvnlms/trace_io.hpp"
#include "dsvnlms/volterra.hpp"

namespace {

using namespace dsvnlms;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitVerification = 3;

constexpr const char* kOutDirEnv = "DSVNLMS_OUT_DIR";

struct RunArgs {
  std::string config_path;
  std::string preset;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_run(const RunArgs& args, bool quiet) {
  if (args.config_path.empty() == args.preset.empty()) {
    std::cerr << "run: give exactly one of <config> / --config or --preset\n";
    return kExitUsage;
  }
  ExperimentConfig config =
      args.preset.empty() ? load_config(args.config_path) : builtin_preset(args.preset);
  if (args.trials || args.seed) {
    const std::uint64_t base = args.seed.value_or(config.seeds.front());
    config.seeds = consecutive_seeds(base, args.trials.value_or(config.seeds.size()));
  }
  if (!args.out.empty()) {
    config.output_dir = args.out;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    config.output_dir = env;
  }
  config.validate();

  const ExperimentResult result = run_experiment(config);
  if (!quiet) {
    std::cout << "experiment=" << result.name << " trials=" << result.trials.size()
              << " output_dir=" << config.output_dir.string() << '\n';
  }
  for (const auto& name : result.variant_names()) {
    const AggregateVerdict a = result.aggregate(name);
    std::cout << "variant=" << name << " update_rate=" << format_double(a.update_rate())
              << " increase_fraction=" << format_double(a.increase_fraction())
              << " local_violations=" << a.local_violations
              << " global_violations=" << a.global_violations << '\n';
  }
  return kExitOk;
}

int cmd_presets(const std::string& write_dir) {
  for (const auto& name : preset_names()) {
    std::cout << std::left << std::setw(8) << name << preset_description(name) << '\n';
    if (write_dir.empty()) continue;
    std::filesystem::create_directories(write_dir);
    const auto path = std::filesystem::path(write_dir) / (name + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << preset_json(name).dump(2) << '\n';
  }
  return kExitOk;
}

int cmd_check(const std::string& trace_path, bool quiet) {
  std::ifstream in(trace_path, std::ios::binary);
  if (!in) throw IoError("cannot open trace " + trace_path);
  std::vector<IterationRecord> records;
  try {
    records = read_trace_csv(in);
  } catch (const std::runtime_error& e) {
    std::cerr << trace_path << ": " << e.what() << '\n';
    return kExitUsage;
  }
  const TraceCheck c = check_trace(records);
  for (auto k : c.violating_rows) std::cout << "violation k=" << k << '\n';
  std::cout << "rows=" << c.rows << " local_violations=" << c.local_violations
            << " global_violations=" << c.global_violations << '\n';
  if (!quiet) std::cout << (c.ok() ? "OK" : "FAILED") << '\n';
  return c.ok() ? kExitOk : kExitVerification;
}

int cmd_dims(int order, int memory) {
  const VolterraConfig config(order, memory);
  std::cout << "position,order,lags\n";
  const auto terms = layout(config);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::cout << i << ',' << terms[i].order() << ',';
    for (std::size_t j = 0; j < terms[i].lags.size(); ++j) {
      std::cout << (j ? " " : "") << terms[i].lags[j];
    }
    std::cout << '\n';
  }
  std::cout << "total=" << config.dimension() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Data-selective Volterra NLMS robustness experiments"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Print only summary lines");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Execute an experiment");
  run->add_option("config_file", run_args.config_path, "Experiment config (JSON)");
  run->add_option("--config", run_args.config_path, "Experiment config (JSON)");
  run->add_option("--preset", run_args.preset, "Built-in preset name");
  run->add_option("--trials", run_args.trials, "Number of trials")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "Base seed; trials use seed, seed+1, ...");
  run->add_option("--out", run_args.out, "Output directory (overrides " + std::string(kOutDirEnv) + ")");

  std::string write_dir;
  auto* presets = app.add_subcommand("presets", "List built-in scenarios");
  presets->add_option("--write", write_dir, "Also write each preset as <dir>/<name>.json");

  std::string trace_path;
  auto* check = app.add_subcommand("check", "Re-verify the robustness bounds on a trace CSV");
  check->add_option("trace", trace_path, "Trace written by run")->required();

  int order = 0;
  int memory = 0;
  auto* dims = app.add_subcommand("dims", "Print the regressor layout for order P and memory N");
  dims->add_option("P", order, "Order")->required();
  dims->add_option("N", memory, "Memory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) return cmd_run(run_args, quiet);
    if (*presets) return cmd_presets(write_dir);
    if (*check) return cmd_check(trace_path, quiet);
    if (*dims) return cmd_dims(order, memory);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
