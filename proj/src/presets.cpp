#include <array>
#include <stdexcept>
#include <string>

#include "dsvnlms/config.hpp"
#include "dsvnlms/errors.hpp"

namespace dsvnlms {

using nlohmann::json;

std::string preset_description(std::string_view name);

namespace {

struct Preset {
  std::string_view name;
  std::string_view description;
};

constexpr std::array<Preset, 6> kPresets{{
    {"fig1a", "l(k) vs r(k), white Gaussian input, gamma = sqrt(5 sigma_n^2)"},
    {"fig1b", "l(k) vs r(k), AR(1) input, gamma = sqrt(5 sigma_n^2)"},
    {"fig2a", "l(k) vs r(k), white Gaussian input, gamma = sqrt(2 sigma_n^2)"},
    {"fig2b", "l(k) vs r(k), AR(1) input, gamma = sqrt(2 sigma_n^2)"},
    {"fig5", "||w~(k)||^2 for VNLMS and DS-VNLMS variants, white Gaussian input"},
    {"fig6", "||w~(k)||^2 for VNLMS and DS-VNLMS variants, AR(1) input"},
}};

json base_document(std::string_view name, bool ar1) {
  json input{{"kind", ar1 ? "ar1" : "white_gaussian"}, {"variance", 1.0}};
  if (ar1) input["ar_coefficient"] = 0.95;
  return json{{"schema_version", kConfigSchemaVersion},
              {"name", name},
              {"description", preset_description(name)},
              {"volterra", {{"order", 3}, {"memory", 3}, {"regularization", 1e-9}}},
              {"channel", "benchmark"},
              {"input", input},
              {"noise", {{"kind", "gaussian"}, {"variance", 0.01}}},
              {"iterations", 2500},
              {"trials", 10},
              {"base_seed", 1},
              {"output_dir", "out/" + std::string(name)}};
}

json fixed_tau(std::string_view name, double tau) {
  return json{{"name", name},
              {"type", "ds_vnlms"},
              {"threshold", {{"mode", "fixed"}, {"tau", tau}}}};
}

json comparison_variants() {
  return json::array({
      {{"name", "vnlms-mu0.8"}, {"type", "vnlms"}, {"mu", 0.8}},
      {{"name", "vnlms-mu0.3"}, {"type", "vnlms"}, {"mu", 0.3}},
      fixed_tau("ds-fixed", 5.0),
      {{"name", "ds-known-bound"},
       {"type", "ds_vnlms"},
       {"threshold", {{"mode", "known_bound"}}},
       {"noise", {{"kind", "uniform_bounded"}, {"bound", 0.1}}}},
      {{"name", "ds-time-varying"},
       {"type", "ds_vnlms"},
       {"threshold",
        {{"mode", "time_varying"},
         {"tau_transient", 5.0},
         {"tau_steady", 9.0},
         {"window_length", 20},
         {"steady_update_threshold", 5}}}},
  });
}

}  // namespace

json preset_json(std::string_view name) {
  if (name == "fig1a" || name == "fig1b" || name == "fig2a" || name == "fig2b") {
    const bool ar1 = name.back() == 'b';
    const double tau = name[3] == '1' ? 5.0 : 2.0;
    json doc = base_document(name, ar1);
    doc["algorithms"] = json::array({fixed_tau("ds-fixed", tau)});
    return doc;
  }
  if (name == "fig5" || name == "fig6") {
    json doc = base_document(name, name == "fig6");
    doc["algorithms"] = comparison_variants();
    return doc;
  }
  throw ConfigError({"preset: unknown name '" + std::string(name) + "'"});
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& p : kPresets) names.emplace_back(p.name);
  return names;
}

std::string preset_description(std::string_view name) {
  for (const auto& p : kPresets) {
    if (p.name == name) return std::string(p.description);
  }
  throw ConfigError({"preset: unknown name '" + std::string(name) + "'"});
}

ExperimentConfig builtin_preset(std::string_view name) { return parse_config(preset_json(name)); }

}  // namespace dsvnlms
