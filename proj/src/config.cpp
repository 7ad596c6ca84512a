#include "dsvnlms/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "dsvnlms/errors.hpp"

namespace dsvnlms {

using nlohmann::json;

namespace {

// Collects every problem in a document before failing, so a config with
// several mistakes is reported in one pass.
class Reader {
 public:
  std::vector<std::string> errors;

  const json* object(const json& parent, const std::string& key, const std::string& path,
                     bool required = true) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) errors.push_back(path + key + ": missing");
      return nullptr;
    }
    if (!it->is_object()) {
      errors.push_back(path + key + ": expected an object");
      return nullptr;
    }
    return &*it;
  }

  template <class T>
  std::optional<T> value(const json& parent, const std::string& key, const std::string& path,
                         bool required = false) {
    auto it = parent.find(key);
    if (it == parent.end()) {
      if (required) errors.push_back(path + key + ": missing");
      return std::nullopt;
    }
    const auto wrong = [&](const char* what) {
      errors.push_back(path + key + ": " + what);
      return std::optional<T>{};
    };
    if constexpr (std::is_same_v<T, double>) {
      if (!it->is_number()) return wrong("expected a number");
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!it->is_boolean()) return wrong("expected true or false");
    } else if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_integer()) return wrong("expected an integer");
      if constexpr (std::is_unsigned_v<T>) {
        if (!it->is_number_unsigned() && it->template get<long long>() < 0) {
          return wrong("expected a nonnegative integer");
        }
      }
    }
    try {
      return it->get<T>();
    } catch (const json::exception&) {
      return wrong("wrong type");
    }
  }

  void reject_unknown(const json& obj, std::initializer_list<std::string_view> known,
                      const std::string& path) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      bool ok = false;
      for (auto k : known) ok = ok || it.key() == k;
      if (!ok) errors.push_back(path + it.key() + ": unknown field");
    }
  }

  /// Runs a component validator and folds its ConfigError into the list.
  template <class F>
  void guard(F&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      errors.insert(errors.end(), e.fields().begin(), e.fields().end());
    }
  }
};

SignalSpec parse_input(Reader& rd, const json& j) {
  const std::string p = "input.";
  rd.reject_unknown(j, {"kind", "variance", "ar_coefficient"}, p);
  SignalSpec s;
  if (auto kind = rd.value<std::string>(j, "kind", p, true)) {
    if (*kind == "white_gaussian") s.kind = InputKind::WhiteGaussian;
    else if (*kind == "ar1") s.kind = InputKind::Ar1;
    else rd.errors.push_back(p + "kind: expected white_gaussian or ar1");
  }
  if (auto v = rd.value<double>(j, "variance", p)) s.variance = *v;
  if (auto v = rd.value<double>(j, "ar_coefficient", p)) s.ar_coefficient = *v;
  return s;
}

NoiseSpec parse_noise(Reader& rd, const json& j, const std::string& p) {
  rd.reject_unknown(j, {"kind", "variance", "bound"}, p);
  NoiseSpec s;
  if (auto kind = rd.value<std::string>(j, "kind", p, true)) {
    if (*kind == "gaussian") s.kind = NoiseKind::Gaussian;
    else if (*kind == "uniform_bounded") s.kind = NoiseKind::UniformBounded;
    else rd.errors.push_back(p + "kind: expected gaussian or uniform_bounded");
  }
  if (auto v = rd.value<double>(j, "variance", p)) s.variance = *v;
  if (auto v = rd.value<double>(j, "bound", p)) s.bound = *v;
  return s;
}

AlgorithmSpec parse_algorithm(Reader& rd, const json& j, std::size_t index, const NoiseSpec& noise) {
  const std::string p = "algorithms[" + std::to_string(index) + "].";
  AlgorithmSpec a;
  if (!j.is_object()) {
    rd.errors.push_back(p.substr(0, p.size() - 1) + ": expected an object");
    return a;
  }
  rd.reject_unknown(j, {"name", "type", "threshold", "mu", "noise"}, p);
  a.name = rd.value<std::string>(j, "name", p, true).value_or("");
  if (const json* n = rd.object(j, "noise", p, false)) a.noise = parse_noise(rd, *n, p + "noise.");
  const NoiseSpec effective = a.noise.value_or(noise);

  const auto type = rd.value<std::string>(j, "type", p, true);
  if (!type) return a;
  if (*type == "vnlms") {
    a.kind = AlgorithmKind::Vnlms;
    a.mu = rd.value<double>(j, "mu", p, true).value_or(0.0);
    if (!(a.mu > 0.0 && a.mu < 2.0)) rd.errors.push_back(p + "mu: must lie in (0, 2)");
    return a;
  }
  if (*type != "ds_vnlms") {
    rd.errors.push_back(p + "type: expected ds_vnlms or vnlms");
    return a;
  }
  a.kind = AlgorithmKind::DsVnlms;
  const json* t = rd.object(j, "threshold", p);
  if (!t) return a;
  const std::string tp = p + "threshold.";
  rd.reject_unknown(*t, {"mode", "gamma", "tau", "tau_transient", "tau_steady", "window_length",
                         "steady_update_threshold"},
                    tp);
  const auto window = rd.value<std::size_t>(*t, "window_length", tp).value_or(20);
  const auto steady = rd.value<std::size_t>(*t, "steady_update_threshold", tp).value_or(5);
  const auto mode = rd.value<std::string>(*t, "mode", tp, true).value_or("");
  rd.guard([&] {
    if (mode == "fixed") {
      const auto gamma = rd.value<double>(*t, "gamma", tp);
      const auto tau = rd.value<double>(*t, "tau", tp);
      if (gamma.has_value() == tau.has_value()) {
        rd.errors.push_back(tp + "fixed mode needs exactly one of gamma or tau");
        return;
      }
      if (tau) {
        if (!(*tau > 0.0)) {
          rd.errors.push_back(tp + "tau: must be > 0");
          return;
        }
        a.policy = ThresholdPolicy::fixed_tau(*tau, noise.variance);
        a.threshold_source = ThresholdSource::Tau;
      } else {
        a.policy = ThresholdPolicy::fixed(*gamma);
        a.policy.noise_variance = noise.variance;
        a.threshold_source = ThresholdSource::Gamma;
      }
    } else if (mode == "known_bound") {
      if (effective.kind != NoiseKind::UniformBounded) {
        rd.errors.push_back(tp + "mode: known_bound requires uniform_bounded noise");
        return;
      }
      a.policy = ThresholdPolicy::fixed(gamma_for_known_bound(effective.bound));
      a.policy.noise_variance = noise.variance;
      a.threshold_source = ThresholdSource::KnownBound;
    } else if (mode == "time_varying") {
      a.policy = ThresholdPolicy::time_varying(
          rd.value<double>(*t, "tau_transient", tp).value_or(5.0),
          rd.value<double>(*t, "tau_steady", tp).value_or(9.0), noise.variance, window, steady);
      a.threshold_source = ThresholdSource::TimeVarying;
    } else {
      rd.errors.push_back(tp + "mode: expected fixed, known_bound or time_varying");
      return;
    }
    a.policy.window_length = window;
    a.policy.steady_update_threshold = steady;
    a.policy.validate();
  });
  return a;
}

json noise_to_json(const NoiseSpec& n) {
  json j{{"kind", std::string(to_string(n.kind))}};
  if (n.kind == NoiseKind::Gaussian) j["variance"] = n.variance;
  else j["bound"] = n.bound;
  return j;
}

}  // namespace

std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, std::size_t trials) {
  std::vector<std::uint64_t> seeds(trials);
  for (std::size_t i = 0; i < trials; ++i) seeds[i] = base + i;
  return seeds;
}

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  if (schema_version != kConfigSchemaVersion) {
    bad.push_back("schema_version: unsupported (expected " + std::to_string(kConfigSchemaVersion) + ")");
  }
  if (iterations < 1) bad.push_back("iterations: must be >= 1");
  if (seeds.empty()) bad.push_back("seeds: at least one trial is required");
  if (algorithms.empty()) bad.push_back("algorithms: at least one variant is required");
  auto fold = [&](auto&& f) {
    try {
      f();
    } catch (const ConfigError& e) {
      bad.insert(bad.end(), e.fields().begin(), e.fields().end());
    }
  };
  fold([&] { input.validate(); });
  fold([&] { noise.validate(); });
  std::set<std::string> names;
  for (const auto& a : algorithms) {
    if (a.name.empty()) bad.push_back("algorithms: every variant needs a name");
    else if (!names.insert(a.name).second) bad.push_back("algorithms: duplicate name '" + a.name + "'");
    if (a.name.find_first_of("/\\") != std::string::npos || a.name == "." || a.name == "..") {
      bad.push_back("algorithms: name '" + a.name + "' is not a valid directory name");
    }
    if (a.kind == AlgorithmKind::Vnlms && !(a.mu > 0.0 && a.mu < 2.0)) {
      bad.push_back("algorithms." + a.name + ".mu: must lie in (0, 2)");
    }
    if (a.kind == AlgorithmKind::DsVnlms) fold([&] { a.policy.validate(); });
    if (a.noise) fold([&] { a.noise->validate(); });
  }
  if (!bad.empty()) throw ConfigError(std::move(bad));
}

ExperimentConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  Reader rd;
  ExperimentConfig c;
  if (!doc.is_object()) throw ConfigError({"config: expected a JSON object"});
  rd.reject_unknown(doc, {"schema_version", "name", "description", "volterra", "channel", "input",
                          "noise", "algorithms", "iterations", "trials", "seeds", "base_seed",
                          "output_dir", "dump_signals"},
                    "");
  c.schema_version = rd.value<int>(doc, "schema_version", "", true).value_or(0);
  c.name = rd.value<std::string>(doc, "name", "").value_or("experiment");

  if (const json* v = rd.object(doc, "volterra", "")) {
    rd.reject_unknown(*v, {"order", "memory", "regularization"}, "volterra.");
    const int order = rd.value<int>(*v, "order", "volterra.", true).value_or(3);
    const int memory = rd.value<int>(*v, "memory", "volterra.", true).value_or(3);
    const double reg = rd.value<double>(*v, "regularization", "volterra.")
                           .value_or(VolterraConfig::kDefaultRegularization);
    rd.guard([&] { c.volterra = VolterraConfig(order, memory, reg); });
  }

  if (auto it = doc.find("channel"); it != doc.end()) {
    if (it->is_string() && *it == "benchmark") {
      c.kernel_file.clear();
    } else if (it->is_object() && it->contains("kernel_file") && (*it)["kernel_file"].is_string()) {
      std::filesystem::path p = (*it)["kernel_file"].get<std::string>();
      c.kernel_file = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    } else {
      rd.errors.push_back("channel: expected \"benchmark\" or {\"kernel_file\": path}");
    }
  }

  if (const json* in = rd.object(doc, "input", "")) c.input = parse_input(rd, *in);
  if (const json* n = rd.object(doc, "noise", "")) c.noise = parse_noise(rd, *n, "noise.");

  if (auto it = doc.find("algorithms"); it == doc.end() || !it->is_array()) {
    rd.errors.push_back("algorithms: expected an array");
  } else {
    for (std::size_t i = 0; i < it->size(); ++i) {
      c.algorithms.push_back(parse_algorithm(rd, (*it)[i], i, c.noise));
    }
  }

  if (auto it = doc.find("iterations"); it != doc.end()) {
    if (auto v = rd.value<std::size_t>(doc, "iterations", "")) c.iterations = *v;
  }
  const auto trials = rd.value<std::size_t>(doc, "trials", "");
  if (auto it = doc.find("seeds"); it != doc.end()) {
    if (auto v = rd.value<std::vector<std::uint64_t>>(doc, "seeds", "")) c.seeds = *v;
    if (trials && *trials != c.seeds.size()) rd.errors.push_back("trials: disagrees with the seed list");
    if (doc.contains("base_seed")) rd.errors.push_back("base_seed: give either seeds or base_seed");
  } else {
    const auto base = rd.value<std::uint64_t>(doc, "base_seed", "").value_or(1);
    c.seeds = consecutive_seeds(base, trials.value_or(1));
  }
  if (auto v = rd.value<std::string>(doc, "output_dir", "")) c.output_dir = *v;
  if (auto v = rd.value<bool>(doc, "dump_signals", "")) c.dump_signals = *v;

  rd.guard([&] { c.validate(); });
  if (!rd.errors.empty()) {
    std::vector<std::string> unique;
    std::set<std::string> seen;
    for (auto& e : rd.errors) {
      if (seen.insert(e).second) unique.push_back(std::move(e));
    }
    throw ConfigError(std::move(unique));
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return parse_config(doc, path.parent_path());
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["schema_version"] = c.schema_version;
  j["name"] = c.name;
  j["volterra"] = {{"order", c.volterra.order()},
                   {"memory", c.volterra.memory()},
                   {"regularization", c.volterra.regularization()}};
  if (c.kernel_file.empty()) j["channel"] = "benchmark";
  else j["channel"] = {{"kernel_file", c.kernel_file.string()}};
  j["input"] = {{"kind", std::string(to_string(c.input.kind))}, {"variance", c.input.variance}};
  if (c.input.kind == InputKind::Ar1) j["input"]["ar_coefficient"] = c.input.ar_coefficient;
  j["noise"] = noise_to_json(c.noise);
  j["algorithms"] = json::array();
  for (const auto& a : c.algorithms) {
    json aj{{"name", a.name}};
    if (a.kind == AlgorithmKind::Vnlms) {
      aj["type"] = "vnlms";
      aj["mu"] = a.mu;
    } else {
      aj["type"] = "ds_vnlms";
      json t;
      switch (a.threshold_source) {
        case ThresholdSource::Gamma:
          t = {{"mode", "fixed"}, {"gamma", a.policy.gamma_fixed}};
          break;
        case ThresholdSource::Tau:
          t = {{"mode", "fixed"}, {"tau", a.policy.tau_transient}};
          break;
        case ThresholdSource::KnownBound:
          t = {{"mode", "known_bound"}};
          break;
        case ThresholdSource::TimeVarying:
          t = {{"mode", "time_varying"},
               {"tau_transient", a.policy.tau_transient},
               {"tau_steady", a.policy.tau_steady}};
          break;
      }
      t["window_length"] = a.policy.window_length;
      t["steady_update_threshold"] = a.policy.steady_update_threshold;
      aj["threshold"] = t;
    }
    if (a.noise) aj["noise"] = noise_to_json(*a.noise);
    j["algorithms"].push_back(aj);
  }
  j["iterations"] = c.iterations;
  j["trials"] = c.seeds.size();
  j["seeds"] = c.seeds;
  j["output_dir"] = c.output_dir.string();
  j["dump_signals"] = c.dump_signals;
  return j;
}

Channel parse_channel(const json& doc) {
  Reader rd;
  if (!doc.is_object()) throw ConfigError({"kernel: expected a JSON object"});
  const int order = rd.value<int>(doc, "order", "kernel.", true).value_or(1);
  const int memory = rd.value<int>(doc, "memory", "kernel.", true).value_or(0);
  std::optional<VolterraConfig> cfg;
  rd.guard([&] { cfg.emplace(order, memory); });
  auto terms = doc.find("terms");
  if (terms == doc.end() || !terms->is_array()) rd.errors.push_back("kernel.terms: expected an array");
  if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));

  KernelVector w = KernelVector::zeros(*cfg);
  for (std::size_t i = 0; i < terms->size(); ++i) {
    const std::string p = "kernel.terms[" + std::to_string(i) + "].";
    const json& t = (*terms)[i];
    if (!t.is_object()) {
      rd.errors.push_back(p + ": expected an object");
      continue;
    }
    auto lags = rd.value<std::vector<int>>(t, "lags", p, true);
    auto value = rd.value<double>(t, "value", p, true);
    if (!lags || !value) continue;
    try {
      w.values[position_of(TermIndex{*lags}, *cfg)] += *value;
    } catch (const InvalidTerm& e) {
      rd.errors.push_back(p + "lags: " + e.what());
    }
  }
  if (!rd.errors.empty()) throw ConfigError(std::move(rd.errors));
  return Channel{std::move(w), *cfg};
}

Channel load_channel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kernel file " + path.string());
  try {
    return parse_channel(json::parse(in));
  } catch (const json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
}

Channel resolve_channel(const ExperimentConfig& config) {
  Channel source = config.kernel_file.empty() ? benchmark_channel() : load_channel(config.kernel_file);
  if (source.config.order() > config.volterra.order() ||
      source.config.memory() > config.volterra.memory()) {
    throw ConfigError({"channel: order " + std::to_string(source.config.order()) + ", memory " +
                       std::to_string(source.config.memory()) +
                       " does not fit the filter layout"});
  }
  return Channel{embed(source.kernel, source.config, config.volterra), config.volterra};
}

}  // namespace dsvnlms
