// config.cpp — JSON schema, presets, CSV writing, and the run pipeline
#include "hubsim/config.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "hubsim/mitigation.hpp"
#include "hubsim/version.hpp"

namespace hubsim {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::uint64_t kCalibrationSeedStream = 0xca11bull;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config: \"" + path + "\" " + what);
}

std::string join_path(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

void check_keys(const Json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument("config: unknown key \"" + join_path(prefix, it.key()) + "\"");
    }
  }
}

const Json* find(const Json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_number(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "must be a number");
  return j.get<double>();
}

long as_integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "must be an integer");
  return j.get<long>();
}

bool as_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "must be true or false");
  return j.get<bool>();
}

std::string as_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "must be a string");
  return j.get<std::string>();
}

Filling parse_filling(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "one_electron") return Filling::OneElectron;
  if (s == "two_electron") return Filling::TwoElectron;
  fail(path, "must be \"one_electron\" or \"two_electron\"");
}

InitialState parse_initial_state(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "site1") return InitialState::site1();
  if (s == "site2") return InitialState::site2();
  if (s == "double_site1") return InitialState::double_site1();
  if (s == "double_site2") return InitialState::double_site2();
  if (s == "singlet") return InitialState::singlet();
  fail(path, "must be one of site1, site2, double_site1, double_site2, singlet");
}

BathCoupling parse_coupling(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "none") return BathCoupling::None;
  if (s == "zz") return BathCoupling::ZZ;
  if (s == "xy") return BathCoupling::XY;
  fail(path, "must be \"none\", \"zz\", or \"xy\"");
}

BathTopology parse_topology(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "common") return BathTopology::Common;
  if (s == "per_qubit") return BathTopology::PerQubit;
  fail(path, "must be \"common\" or \"per_qubit\"");
}

BathMode parse_mode(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "reset") return BathMode::Reset;
  if (s == "fresh") return BathMode::Fresh;
  fail(path, "must be \"reset\" or \"fresh\"");
}

AngleConvention parse_convention(const Json& j, const std::string& path) {
  const std::string s = as_string(j, path);
  if (s == "circuit") return AngleConvention::Circuit;
  if (s == "stated") return AngleConvention::Stated;
  fail(path, "must be \"circuit\" or \"stated\"");
}

double probability_field(const Json& obj, const std::string& prefix, const char* key,
                         double fallback) {
  const Json* j = find(obj, key);
  if (!j) return fallback;
  const std::string path = join_path(prefix, key);
  const double v = as_number(*j, path);
  if (v < 0.0 || v > 1.0) fail(path, "must lie in [0, 1]");
  return v;
}

ModelSpec parse_model(const Json& obj) {
  if (!obj.is_object()) fail("model", "must be an object");
  check_keys(obj, "model", {"filling", "eps_dt", "t12_dt", "uc_dt", "steps"});
  ModelSpec model;
  const Json* filling = find(obj, "filling");
  if (!filling) fail("model.filling", "is required");
  model.filling = parse_filling(*filling, "model.filling");
  if (const Json* j = find(obj, "eps_dt")) model.eps_dt = as_number(*j, "model.eps_dt");
  if (const Json* j = find(obj, "t12_dt")) model.t12_dt = as_number(*j, "model.t12_dt");
  if (const Json* j = find(obj, "uc_dt")) model.uc_dt = as_number(*j, "model.uc_dt");
  const Json* steps = find(obj, "steps");
  if (!steps) fail("model.steps", "is required");
  model.steps = static_cast<int>(as_integer(*steps, "model.steps"));
  if (model.steps < 0 || model.steps > 100000) fail("model.steps", "must lie in [0, 100000]");
  return model;
}

BathSpec parse_bath(const Json& obj) {
  if (!obj.is_object()) fail("bath", "must be an object");
  check_keys(obj, "bath",
             {"coupling", "g_dt", "topology", "mode", "thermal", "beta_omega",
              "angle_convention"});
  BathSpec bath;
  if (const Json* j = find(obj, "coupling")) bath.coupling = parse_coupling(*j, "bath.coupling");
  if (const Json* j = find(obj, "g_dt")) bath.g_dt = as_number(*j, "bath.g_dt");
  if (const Json* j = find(obj, "topology")) bath.topology = parse_topology(*j, "bath.topology");
  if (const Json* j = find(obj, "mode")) bath.mode = parse_mode(*j, "bath.mode");
  if (const Json* j = find(obj, "thermal")) bath.state.thermal = as_bool(*j, "bath.thermal");
  if (const Json* j = find(obj, "beta_omega")) {
    bath.state.beta_omega = as_number(*j, "bath.beta_omega");
  }
  if (const Json* j = find(obj, "angle_convention")) {
    bath.convention = parse_convention(*j, "bath.angle_convention");
  }
  if (bath.coupling == BathCoupling::None && bath.g_dt != 0.0) {
    fail("bath.g_dt", "must be 0 when the coupling is \"none\"");
  }
  return bath;
}

NoiseModel parse_noise(const Json& obj) {
  if (!obj.is_object()) fail("noise", "must be an object");
  check_keys(obj, "noise",
             {"depolarizing_1q", "depolarizing_2q", "amplitude_decay_per_step", "readout_flip"});
  NoiseModel noise;
  noise.depolarizing_1q = probability_field(obj, "noise", "depolarizing_1q", 0.0);
  noise.depolarizing_2q = probability_field(obj, "noise", "depolarizing_2q", 0.0);
  noise.amplitude_decay_per_step =
      probability_field(obj, "noise", "amplitude_decay_per_step", 0.0);
  if (const Json* j = find(obj, "readout_flip")) {
    if (!j->is_array()) fail("noise.readout_flip", "must be an array of [p01, p10] pairs");
    for (std::size_t i = 0; i < j->size(); ++i) {
      const Json& pair = (*j)[i];
      const std::string path = "noise.readout_flip[" + std::to_string(i) + "]";
      if (!pair.is_array() || pair.size() != 2) fail(path, "must be a [p01, p10] pair");
      const double p01 = as_number(pair[0], path + "[0]");
      const double p10 = as_number(pair[1], path + "[1]");
      if (p01 < 0.0 || p01 > 1.0) fail(path + "[0]", "must lie in [0, 1]");
      if (p10 < 0.0 || p10 > 1.0) fail(path + "[1]", "must lie in [0, 1]");
      noise.readout_flip.emplace_back(p01, p10);
    }
  }
  return noise;
}

MitigationSpec parse_mitigation(const Json& obj) {
  if (!obj.is_object()) fail("mitigation", "must be an object");
  check_keys(obj, "mitigation", {"readout", "bitflip", "zne", "calibration_shots", "raw_inverse"});
  MitigationSpec mit;
  if (const Json* j = find(obj, "readout")) mit.readout = as_bool(*j, "mitigation.readout");
  if (const Json* j = find(obj, "bitflip")) mit.bitflip = as_bool(*j, "mitigation.bitflip");
  if (const Json* j = find(obj, "zne")) {
    if (!j->is_object()) fail("mitigation.zne", "must be an object");
    check_keys(*j, "mitigation.zne", {"order", "scales"});
    ZneSpec zne;
    if (const Json* o = find(*j, "order")) {
      zne.order = static_cast<int>(as_integer(*o, "mitigation.zne.order"));
      if (zne.order < 1) fail("mitigation.zne.order", "must be at least 1");
    }
    if (const Json* s = find(*j, "scales")) {
      if (!s->is_array() || s->empty()) {
        fail("mitigation.zne.scales", "must be a nonempty array of integers");
      }
      zne.scales.clear();
      for (std::size_t i = 0; i < s->size(); ++i) {
        const std::string path = "mitigation.zne.scales[" + std::to_string(i) + "]";
        const long v = as_integer((*s)[i], path);
        if (v < 1) fail(path, "must be a positive integer");
        zne.scales.push_back(static_cast<int>(v));
      }
    }
    mit.zne = std::move(zne);
  }
  if (const Json* j = find(obj, "calibration_shots")) {
    mit.calibration_shots = as_integer(*j, "mitigation.calibration_shots");
    if (mit.calibration_shots <= 0) fail("mitigation.calibration_shots", "must be positive");
  }
  if (const Json* j = find(obj, "raw_inverse")) {
    mit.raw_inverse = as_bool(*j, "mitigation.raw_inverse");
  }
  return mit;
}

const char* filling_name(Filling filling) {
  return filling == Filling::OneElectron ? "one_electron" : "two_electron";
}

const char* coupling_name(BathCoupling coupling) {
  switch (coupling) {
    case BathCoupling::None: return "none";
    case BathCoupling::ZZ: return "zz";
    case BathCoupling::XY: return "xy";
  }
  throw std::logic_error("coupling_name: bad enum");
}

Json config_to_json(const ExperimentConfig& config) {
  if (config.init.kind() == InitialState::Kind::Custom) {
    throw std::invalid_argument("serialize_config: custom initial states have no JSON spelling");
  }
  Json j;
  j["name"] = config.name;
  j["model"] = Json{{"filling", filling_name(config.model.filling)},
                    {"eps_dt", config.model.eps_dt},
                    {"t12_dt", config.model.t12_dt},
                    {"uc_dt", config.model.uc_dt},
                    {"steps", config.model.steps}};
  j["initial_state"] = config.init.name();
  Json bath;
  bath["coupling"] = coupling_name(config.bath.coupling);
  bath["g_dt"] = config.bath.g_dt;
  bath["topology"] = config.bath.topology == BathTopology::Common ? "common" : "per_qubit";
  bath["mode"] = config.bath.mode == BathMode::Reset ? "reset" : "fresh";
  bath["thermal"] = config.bath.state.thermal;
  bath["beta_omega"] = config.bath.state.beta_omega;
  bath["angle_convention"] =
      config.bath.convention == AngleConvention::Circuit ? "circuit" : "stated";
  j["bath"] = std::move(bath);
  Json noise;
  noise["depolarizing_1q"] = config.noise.depolarizing_1q;
  noise["depolarizing_2q"] = config.noise.depolarizing_2q;
  noise["amplitude_decay_per_step"] = config.noise.amplitude_decay_per_step;
  Json flips = Json::array();
  for (const auto& [p01, p10] : config.noise.readout_flip) {
    flips.push_back(Json::array({p01, p10}));
  }
  noise["readout_flip"] = std::move(flips);
  j["noise"] = std::move(noise);
  j["shots"] = config.shots;
  j["seed"] = config.seed;
  Json mit;
  mit["readout"] = config.mitigation.readout;
  mit["bitflip"] = config.mitigation.bitflip;
  if (config.mitigation.zne) {
    mit["zne"] = Json{{"order", config.mitigation.zne->order},
                      {"scales", config.mitigation.zne->scales}};
  }
  mit["calibration_shots"] = config.mitigation.calibration_shots;
  mit["raw_inverse"] = config.mitigation.raw_inverse;
  j["mitigation"] = std::move(mit);
  j["output_path"] = config.output_path;
  return j;
}

void format_value(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  out += buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail("", "top level must be an object");
  check_keys(root, "",
             {"name", "model", "initial_state", "bath", "noise", "shots", "seed", "mitigation",
              "output_path"});

  ExperimentConfig config;
  const Json* model = find(root, "model");
  if (!model) fail("model", "is required");
  config.model = parse_model(*model);

  if (const Json* j = find(root, "name")) config.name = as_string(*j, "name");
  if (const Json* j = find(root, "initial_state")) {
    config.init = parse_initial_state(*j, "initial_state");
  } else {
    config.init = config.model.filling == Filling::OneElectron ? InitialState::site2()
                                                               : InitialState::double_site2();
  }
  if (const Json* j = find(root, "bath")) config.bath = parse_bath(*j);
  if (const Json* j = find(root, "noise")) config.noise = parse_noise(*j);
  if (const Json* j = find(root, "shots")) {
    config.shots = as_integer(*j, "shots");
    if (config.shots < 0) fail("shots", "must be nonnegative");
  }
  if (const Json* j = find(root, "seed")) {
    if (!j->is_number_integer() || (j->is_number_integer() && !j->is_number_unsigned() &&
                                    j->get<long long>() < 0)) {
      fail("seed", "must be a nonnegative integer");
    }
    config.seed = j->get<std::uint64_t>();
  }
  if (const Json* j = find(root, "mitigation")) config.mitigation = parse_mitigation(*j);
  if (const Json* j = find(root, "output_path")) config.output_path = as_string(*j, "output_path");

  try {
    config.validate();
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return config;
}

std::string serialize_config(const ExperimentConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

std::vector<std::string> preset_names() {
  return {"fig4_upper", "fig4_lower", "fig5_upper", "fig5_lower",
          "fig6_upper", "fig6_lower", "fig7_dfs",   "fig7_mitigation"};
}

ExperimentConfig make_preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.shots = 8192;
  c.seed = 0;
  if (name == "fig4_upper" || name == "fig4_lower") {
    c.model = ModelSpec{Filling::OneElectron, 0.2, 0.1, 0.0, 25};
    c.init = InitialState::site2();
    if (name == "fig4_lower") {
      c.bath.coupling = BathCoupling::XY;
      c.bath.g_dt = 0.5;
    }
    return c;
  }
  if (name == "fig5_upper" || name == "fig5_lower") {
    c.model = ModelSpec{Filling::OneElectron, 0.0, 0.1, 0.0, 25};
    c.init = InitialState::site2();
    if (name == "fig5_lower") {
      c.bath.coupling = BathCoupling::ZZ;
      c.bath.g_dt = 0.5;
    }
    return c;
  }
  if (name == "fig6_upper" || name == "fig6_lower") {
    c.model = ModelSpec{Filling::TwoElectron, 0.0, 0.1, 0.4, 64};
    c.init = InitialState::double_site2();
    if (name == "fig6_lower") {
      c.bath.coupling = BathCoupling::XY;
      c.bath.g_dt = 0.5;
      c.bath.topology = BathTopology::PerQubit;
    }
    return c;
  }
  if (name == "fig7_dfs") {
    c.model = ModelSpec{Filling::TwoElectron, 0.0, 0.1, 0.4, 50};
    c.init = InitialState::singlet();
    c.bath.coupling = BathCoupling::ZZ;
    c.bath.g_dt = 0.5;
    c.bath.topology = BathTopology::Common;
    return c;
  }
  if (name == "fig7_mitigation") {
    c.model = ModelSpec{Filling::TwoElectron, 0.0, 0.1, 0.4, 10};
    c.init = InitialState::double_site2();
    c.noise.depolarizing_1q = 0.005;
    c.noise.depolarizing_2q = 0.005;
    c.noise.amplitude_decay_per_step = 0.01;
    c.noise.readout_flip = {{0.02, 0.05}};
    c.mitigation.readout = true;
    c.mitigation.bitflip = true;
    c.mitigation.zne = ZneSpec{};
    c.mitigation.calibration_shots = 8192;
    return c;
  }
  std::string names;
  for (const std::string& n : preset_names()) {
    if (!names.empty()) names += ", ";
    names += n;
  }
  throw std::invalid_argument("make_preset: unknown preset \"" + name + "\"; expected one of " +
                              names);
}

std::string trace_to_csv(const PopulationTrace& trace) {
  std::string out = "n";
  for (const std::string& label : trace.labels) {
    out += ',';
    out += label;
  }
  out += '\n';
  for (std::size_t n = 0; n < trace.rows.size(); ++n) {
    out += std::to_string(n);
    for (double v : trace.rows[n]) {
      out += ',';
      format_value(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::string& path, const PopulationTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_trace_csv: cannot open " + path);
  }
  const std::string text = trace_to_csv(trace);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) {
    throw std::runtime_error("write_trace_csv: write failed for " + path);
  }
}

ExperimentConfig apply_cli_options(ExperimentConfig config, const CliOptions& options) {
  if (options.shots) config.shots = *options.shots;
  if (options.seed) config.seed = *options.seed;
  if (options.exact) {
    config.shots = 0;
    config.mitigation.readout = false;
    config.mitigation.bitflip = false;
  }
  if (options.raw_inverse) config.mitigation.raw_inverse = true;
  if (options.angle_convention) config.bath.convention = *options.angle_convention;
  return config;
}

std::string output_directory(const ExperimentConfig& config) {
  if (const char* env = std::getenv("SIM_OUTPUT_DIR"); env && *env) {
    return env;
  }
  return config.output_path.empty() ? "." : config.output_path;
}

RunArtifacts run_config(ExperimentConfig config, const CliOptions& options) {
  config = apply_cli_options(std::move(config), options);
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();

  const std::filesystem::path dir = output_directory(config);
  std::filesystem::create_directories(dir);
  RunArtifacts artifacts;
  artifacts.directory = dir.string();

  auto emit = [&](const std::string& suffix, const PopulationTrace& trace) {
    const std::string file = config.name + suffix;
    write_trace_csv((dir / file).string(), trace);
    artifacts.files.push_back(file);
  };

  // Each run is a pure function of its config, so independent runs may execute
  // concurrently; the emission order below fixes every output byte either way.
  const std::launch launch = options.parallel ? std::launch::async : std::launch::deferred;

  // Noise-free, shot-free reference of the configured dynamics (the bath is
  // part of the model, so it stays).
  ExperimentConfig exact = config;
  exact.shots = 0;
  exact.noise = NoiseModel{};
  exact.mitigation = MitigationSpec{};
  exact.bitflip_conjugated = false;
  std::future<PopulationTrace> exact_run =
      std::async(launch, [exact] { return run_experiment(exact); });

  std::future<PopulationTrace> sampled_run;
  if (config.shots > 0) {
    ExperimentConfig raw = config;
    raw.mitigation = MitigationSpec{};
    sampled_run = std::async(launch, [raw] { return run_experiment(raw); });
  }
  std::future<PopulationTrace> zne_run;
  if (config.mitigation.zne) {
    zne_run = std::async(launch, [config, parallel = options.parallel] {
      return zne_trace(config, parallel);
    });
  }
  std::future<PopulationTrace> bitflip_run;
  if (config.mitigation.bitflip) {
    bitflip_run = std::async(launch, [config, parallel = options.parallel] {
      return bitflip_trace(config, parallel);
    });
  }

  emit("_exact.csv", exact_run.get());
  std::optional<PopulationTrace> sampled;
  if (sampled_run.valid()) {
    sampled = sampled_run.get();
    emit("_sampled.csv", *sampled);
  }
  if (config.mitigation.readout) {
    const ConfusionMatrix cm = build_confusion_matrix(
        config.noise.readout_for(config.model.num_qubits()), config.model.num_qubits(),
        config.mitigation.calibration_shots, mix_seed(config.seed, kCalibrationSeedStream));
    emit("_mitigated_readout.csv", correct_trace(*sampled, cm, config.mitigation.raw_inverse));
  }
  if (zne_run.valid()) {
    emit("_mitigated_zne.csv", zne_run.get());
  }
  if (bitflip_run.valid()) {
    emit("_mitigated_bitflip.csv", bitflip_run.get());
  }

  const auto t1 = std::chrono::steady_clock::now();
  artifacts.duration_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  Json manifest;
  manifest["name"] = config.name;
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(config);
  manifest["files"] = artifacts.files;
  manifest["duration_ms"] = artifacts.duration_ms;
  artifacts.manifest_file = config.name + "_manifest.json";
  std::ofstream out(dir / artifacts.manifest_file, std::ios::binary);
  if (!out) {
    throw std::runtime_error("run_config: cannot write manifest in " + artifacts.directory);
  }
  const std::string text = manifest.dump(2) + "\n";
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  return artifacts;
}

RunArtifacts run_preset(const std::string& name, const CliOptions& options) {
  return run_config(make_preset(name), options);
}

}  // namespace hubsim
