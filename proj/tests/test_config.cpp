// test_config.cpp — JSON schema, presets, CSV bytes, pipeline determinism
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hubsim/config.hpp"
#include "hubsim/version.hpp"

using namespace hubsim;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string minimal_json() {
  return R"({"model": {"filling": "one_electron", "t12_dt": 0.1, "steps": 3}})";
}

std::filesystem::path fresh_dir(const std::string& name) {
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "hubsim_tests" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("defaults") {
  const ExperimentConfig c = parse_config(minimal_json());
  CHECK(c.name == "run");
  CHECK(c.shots == 8192);
  CHECK(c.seed == 0);
  CHECK(c.bath.coupling == BathCoupling::None);
  CHECK(c.init.kind() == InitialState::Kind::Site2);
  CHECK(c.noise.trivial());
  CHECK_FALSE(c.mitigation.any());
  CHECK(c.model.eps_dt == 0.0);

  const ExperimentConfig c2 = parse_config(
      R"({"model": {"filling": "two_electron", "t12_dt": 0.1, "uc_dt": 0.4, "steps": 3}})");
  CHECK(c2.init.kind() == InitialState::Kind::DoubleSite2);
}

TEST_CASE("unknown keys name the full path") {
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"model": {"filling": "one_electron", "steps": 3, "foo": 1}})"),
      "config: unknown key \"model.foo\"", std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(R"({"shotz": 5, "model": {"filling": "one_electron", "steps": 3}})"),
      "config: unknown key \"shotz\"", std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config(
          R"({"model": {"filling": "one_electron", "steps": 3},
              "mitigation": {"zne": {"order": 1, "scale": [1, 2]}}})"),
      "config: unknown key \"mitigation.zne.scale\"", std::invalid_argument);
}

TEST_CASE("out-of-range and type errors name the path") {
  using doctest::Contains;
  CHECK_THROWS_WITH(parse_config(R"({"model": {"filling": "one_electron", "steps": -1}})"),
                    Contains("model.steps"));
  CHECK_THROWS_WITH(parse_config(R"({"model": {"filling": "three_electron", "steps": 1}})"),
                    Contains("model.filling"));
  CHECK_THROWS_WITH(parse_config(
                        R"({"model": {"filling": "one_electron", "steps": 1},
                            "noise": {"depolarizing_1q": 1.5}})"),
                    Contains("noise.depolarizing_1q"));
  CHECK_THROWS_WITH(parse_config(
                        R"({"model": {"filling": "one_electron", "steps": 1}, "shots": -2})"),
                    Contains("shots"));
  CHECK_THROWS_WITH(parse_config(
                        R"({"model": {"filling": "one_electron", "steps": 1},
                            "bath": {"coupling": "none", "g_dt": 0.5}})"),
                    Contains("bath.g_dt"));
  CHECK_THROWS_WITH(parse_config(
                        R"({"model": {"filling": "one_electron", "steps": 1},
                            "noise": {"readout_flip": [[0.1]]}})"),
                    Contains("readout_flip[0]"));
  CHECK_THROWS_WITH(parse_config(
                        R"({"model": {"filling": "one_electron", "steps": 0.5}})"),
                    Contains("model.steps"));
  CHECK_THROWS_WITH(parse_config("[1, 2]"), Contains("top level"));
  CHECK_THROWS_WITH(parse_config("{nope"), Contains("invalid JSON"));
  // Sampling-dependent mitigation needs shots; the validator runs inside parse.
  CHECK_THROWS_AS(parse_config(
                      R"({"model": {"filling": "one_electron", "steps": 1},
                          "shots": 0, "mitigation": {"readout": true},
                          "noise": {"readout_flip": [[0.02, 0.05]]}})"),
                  std::invalid_argument);
}

TEST_CASE("serialize and parse round-trip") {
  const ExperimentConfig preset = make_preset("fig7_mitigation");
  const std::string once = serialize_config(preset);
  const std::string twice = serialize_config(parse_config(once));
  CHECK(once == twice);

  const ExperimentConfig manual = parse_config(
      R"({"name": "probe",
          "model": {"filling": "two_electron", "t12_dt": 0.1, "uc_dt": 0.4, "steps": 9},
          "initial_state": "singlet",
          "bath": {"coupling": "zz", "g_dt": 0.5, "topology": "common",
                   "mode": "fresh", "thermal": true, "beta_omega": 0.7,
                   "angle_convention": "stated"},
          "shots": 77, "seed": 123})");
  CHECK(manual.bath.mode == BathMode::Fresh);
  CHECK(manual.bath.state.thermal);
  CHECK(manual.bath.convention == AngleConvention::Stated);
  CHECK(serialize_config(parse_config(serialize_config(manual))) == serialize_config(manual));
}

TEST_CASE("preset catalog") {
  CHECK(preset_names().size() == 8);
  CHECK_THROWS_AS(make_preset("fig9_nope"), std::invalid_argument);

  const ExperimentConfig fig4 = make_preset("fig4_upper");
  CHECK(fig4.model.filling == Filling::OneElectron);
  CHECK(fig4.model.eps_dt == doctest::Approx(0.2));
  CHECK(fig4.model.t12_dt == doctest::Approx(0.1));
  CHECK(fig4.model.steps == 25);
  CHECK(fig4.bath.coupling == BathCoupling::None);

  const ExperimentConfig fig4l = make_preset("fig4_lower");
  CHECK(fig4l.bath.coupling == BathCoupling::XY);
  CHECK(fig4l.bath.g_dt == doctest::Approx(0.5));

  const ExperimentConfig fig5 = make_preset("fig5_upper");
  CHECK(fig5.model.eps_dt == 0.0);
  CHECK(make_preset("fig5_lower").bath.coupling == BathCoupling::ZZ);

  const ExperimentConfig fig6 = make_preset("fig6_upper");
  CHECK(fig6.model.filling == Filling::TwoElectron);
  CHECK(fig6.model.uc_dt == doctest::Approx(0.4));
  CHECK(fig6.model.steps == 64);
  CHECK(make_preset("fig6_lower").bath.topology == BathTopology::PerQubit);

  const ExperimentConfig dfs = make_preset("fig7_dfs");
  CHECK(dfs.init.kind() == InitialState::Kind::Singlet);
  CHECK(dfs.bath.coupling == BathCoupling::ZZ);
  CHECK(dfs.bath.topology == BathTopology::Common);
  CHECK(dfs.model.steps == 50);

  const ExperimentConfig mit = make_preset("fig7_mitigation");
  CHECK(mit.noise.depolarizing_1q == doctest::Approx(0.005));
  CHECK(mit.noise.amplitude_decay_per_step == doctest::Approx(0.01));
  CHECK(mit.noise.readout_flip.size() == 1);
  CHECK(mit.mitigation.readout);
  CHECK(mit.mitigation.bitflip);
  CHECK(mit.mitigation.zne.has_value());
  // Every preset validates and runs.
  for (const std::string& name : preset_names()) {
    CHECK_NOTHROW(make_preset(name).validate());
  }
}

TEST_CASE("csv bytes are stable") {
  PopulationTrace trace;
  trace.labels = {"p_0", "p_1"};
  trace.rows = {{0.0, 1.0}, {1.0 / 3.0, 2.0 / 3.0}};
  CHECK(trace_to_csv(trace) ==
        "n,p_0,p_1\n"
        "0,0,1\n"
        "1,0.333333333333,0.666666666667\n");
}

TEST_CASE("cli options apply in order") {
  ExperimentConfig c = make_preset("fig7_mitigation");
  CliOptions options;
  options.shots = 999;
  options.seed = 4;
  options.raw_inverse = true;
  options.angle_convention = AngleConvention::Stated;
  c = apply_cli_options(std::move(c), options);
  CHECK(c.shots == 999);
  CHECK(c.seed == 4);
  CHECK(c.mitigation.raw_inverse);
  CHECK(c.bath.convention == AngleConvention::Stated);

  CliOptions exact;
  exact.exact = true;
  c = apply_cli_options(std::move(c), exact);
  CHECK(c.shots == 0);
  CHECK_FALSE(c.mitigation.readout);
  CHECK_FALSE(c.mitigation.bitflip);
  CHECK(c.mitigation.zne.has_value());  // extrapolation survives exact mode
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("run_config writes the expected artifact set") {
  const std::filesystem::path dir = fresh_dir("artifact_set");
  ExperimentConfig c = make_preset("fig7_mitigation");
  c.output_path = dir.string();
  CliOptions options;
  options.shots = 256;
  const RunArtifacts artifacts = run_config(c, options);

  CHECK(artifacts.files ==
        std::vector<std::string>{"fig7_mitigation_exact.csv", "fig7_mitigation_sampled.csv",
                                 "fig7_mitigation_mitigated_readout.csv",
                                 "fig7_mitigation_mitigated_zne.csv",
                                 "fig7_mitigation_mitigated_bitflip.csv"});
  for (const std::string& file : artifacts.files) {
    CHECK(std::filesystem::exists(dir / file));
  }
  const std::string manifest = read_file(dir / artifacts.manifest_file);
  CHECK(manifest.find("\"version\": \"" + std::string(kVersion) + "\"") != std::string::npos);
  CHECK(manifest.find("\"fig7_mitigation_mitigated_zne.csv\"") != std::string::npos);
  CHECK(manifest.find("\"duration_ms\"") != std::string::npos);

  // The exact file never contains sampled frequencies.
  const std::string exact_csv = read_file(dir / "fig7_mitigation_exact.csv");
  CHECK(exact_csv.substr(0, 15) == "n,p_00,p_01,p_1");
}

TEST_CASE("reruns are byte-identical") {
  const std::filesystem::path dir_a = fresh_dir("rerun_a");
  const std::filesystem::path dir_b = fresh_dir("rerun_b");
  CliOptions options;
  options.shots = 512;
  ExperimentConfig a = make_preset("fig4_lower");
  a.output_path = dir_a.string();
  ExperimentConfig b = make_preset("fig4_lower");
  b.output_path = dir_b.string();
  const RunArtifacts first = run_config(a, options);
  const RunArtifacts second = run_config(b, options);
  REQUIRE(first.files == second.files);
  for (const std::string& file : first.files) {
    CHECK(read_file(dir_a / file) == read_file(dir_b / file));
  }
}

TEST_CASE("the manifest's echoed config reproduces the run") {
  const std::filesystem::path dir_a = fresh_dir("manifest_a");
  const std::filesystem::path dir_b = fresh_dir("manifest_b");
  ExperimentConfig original = make_preset("fig6_lower");
  original.output_path = dir_a.string();
  CliOptions options;
  options.shots = 1024;
  const RunArtifacts first = run_config(original, options);

  // The echoed config already carries the CLI-resolved shot count and seed,
  // so the replay takes no options; only the destination changes.
  const nlohmann::json manifest =
      nlohmann::json::parse(read_file(dir_a / first.manifest_file));
  ExperimentConfig replay = parse_config(manifest.at("config").dump());
  replay.output_path = dir_b.string();
  const RunArtifacts second = run_config(replay, CliOptions{});
  REQUIRE(first.files == second.files);
  for (const std::string& file : first.files) {
    CHECK(read_file(dir_a / file) == read_file(dir_b / file));
  }
}

TEST_CASE("concurrent runs produce the same bytes") {
  // fig7_mitigation fans out into every independent run the pipeline has:
  // exact, sampled, two zne scales, and two bitflip frames.
  const std::filesystem::path dir_a = fresh_dir("parallel_a");
  const std::filesystem::path dir_b = fresh_dir("parallel_b");
  CliOptions sequential;
  sequential.shots = 2048;
  CliOptions parallel = sequential;
  parallel.parallel = true;
  ExperimentConfig a = make_preset("fig7_mitigation");
  a.output_path = dir_a.string();
  ExperimentConfig b = make_preset("fig7_mitigation");
  b.output_path = dir_b.string();
  const RunArtifacts first = run_config(a, sequential);
  const RunArtifacts second = run_config(b, parallel);
  REQUIRE(first.files == second.files);
  for (const std::string& file : first.files) {
    CHECK(read_file(dir_a / file) == read_file(dir_b / file));
  }
}

TEST_CASE("SIM_OUTPUT_DIR overrides the configured path") {
  const std::filesystem::path dir = fresh_dir("env_override");
  REQUIRE(setenv("SIM_OUTPUT_DIR", dir.c_str(), 1) == 0);
  ExperimentConfig c = make_preset("fig5_upper");
  c.output_path = "/nonexistent/should/not/be/used";
  CliOptions options;
  options.shots = 64;
  const RunArtifacts artifacts = run_config(c, options);
  REQUIRE(unsetenv("SIM_OUTPUT_DIR") == 0);
  CHECK(artifacts.directory == dir.string());
  CHECK(std::filesystem::exists(dir / "fig5_upper_exact.csv"));
}

TEST_CASE("exact mode skips sampling artifacts") {
  const std::filesystem::path dir = fresh_dir("exact_mode");
  ExperimentConfig c = make_preset("fig7_mitigation");
  c.output_path = dir.string();
  CliOptions options;
  options.exact = true;
  const RunArtifacts artifacts = run_config(c, options);
  CHECK(artifacts.files ==
        std::vector<std::string>{"fig7_mitigation_exact.csv",
                                 "fig7_mitigation_mitigated_zne.csv"});
}

TEST_CASE("angle convention changes xy dynamics end to end") {
  const std::filesystem::path dir_a = fresh_dir("convention_circuit");
  const std::filesystem::path dir_b = fresh_dir("convention_stated");
  CliOptions circuit;
  circuit.exact = true;
  CliOptions stated = circuit;
  stated.angle_convention = AngleConvention::Stated;
  ExperimentConfig a = make_preset("fig4_lower");
  a.output_path = dir_a.string();
  ExperimentConfig b = make_preset("fig4_lower");
  b.output_path = dir_b.string();
  run_config(a, circuit);
  run_config(b, stated);
  CHECK(read_file(dir_a / "fig4_lower_exact.csv") != read_file(dir_b / "fig4_lower_exact.csv"));
}

}  // TEST_SUITE
