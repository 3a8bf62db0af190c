// config.hpp — JSON configs, named presets, CSV output, run orchestration
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hubsim/engine.hpp"
#include "hubsim/trace.hpp"

namespace hubsim {

// Strict JSON parsing: unknown keys, wrong types, and out-of-range values
// throw with the offending JSON path in the message. Absent keys fall back
// to defaults (shots 8192, seed 0, no bath, no noise, no mitigation, and an
// initial state matching the filling: site2 or double_site2).
ExperimentConfig parse_config(const std::string& json_text);

// Full config as pretty-printed JSON; parse_config(serialize_config(c))
// round-trips every field the schema covers. Custom initial states have no
// JSON spelling and cannot be serialized.
std::string serialize_config(const ExperimentConfig& config);

std::vector<std::string> preset_names();
ExperimentConfig make_preset(const std::string& name);

// "n,<labels...>" header, one row per step count, %.12g values, LF endings.
std::string trace_to_csv(const PopulationTrace& trace);
void write_trace_csv(const std::string& path, const PopulationTrace& trace);

struct CliOptions {
  std::optional<long> shots;
  std::optional<std::uint64_t> seed;
  bool exact = false;        // shots = 0; drops readout/bitflip mitigation
  bool raw_inverse = false;  // readout correction without simplex projection
  std::optional<AngleConvention> angle_convention;
  bool parallel = false;     // independent runs on threads, same bytes
};

ExperimentConfig apply_cli_options(ExperimentConfig config, const CliOptions& options);

// SIM_OUTPUT_DIR overrides config.output_path; both empty means the
// current directory.
std::string output_directory(const ExperimentConfig& config);

struct RunArtifacts {
  std::string directory;
  std::vector<std::string> files;  // CSV basenames in write order
  std::string manifest_file;
  double duration_ms = 0.0;
};

// Writes <name>_exact.csv (noise-free channel probabilities), and when
// sampling <name>_sampled.csv, plus one <name>_mitigated_*.csv per enabled
// technique and <name>_manifest.json.
RunArtifacts run_config(ExperimentConfig config, const CliOptions& options = {});
RunArtifacts run_preset(const std::string& name, const CliOptions& options = {});

}  // namespace hubsim
