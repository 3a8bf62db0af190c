// engine.hpp — step evolution, noise composition, runs, and shot sampling
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hubsim/bath.hpp"
#include "hubsim/hubbard.hpp"
#include "hubsim/trace.hpp"

namespace hubsim {

// Hardware-style noise attached to the ideal circuit: a depolarizing channel
// after every gate (two-qubit gates get their own, typically larger, value),
// per-qubit amplitude decay once per step, and classical readout bit flips
// applied per shot at sampling time (exact rows never include readout error).
struct NoiseModel {
  double depolarizing_1q = 0.0;
  double depolarizing_2q = 0.0;
  double amplitude_decay_per_step = 0.0;
  // Per qubit (p(read 1 | true 0), p(read 0 | true 1)); one entry broadcasts.
  std::vector<std::pair<double, double>> readout_flip;

  void validate() const;
  bool trivial() const;

  // Expanded per-qubit flip table (size num_qubits, zeros when unset).
  std::vector<std::pair<double, double>> readout_for(int num_qubits) const;
};

struct ZneSpec {
  int order = 1;
  std::vector<int> scales = {1, 2};
};

struct MitigationSpec {
  bool readout = false;
  bool bitflip = false;
  std::optional<ZneSpec> zne;
  long calibration_shots = 8192;
  bool raw_inverse = false;  // skip the simplex projection after inversion

  bool any() const { return readout || bitflip || zne.has_value(); }
};

struct ExperimentConfig {
  std::string name = "run";
  ModelSpec model;
  InitialState init = InitialState::site2();
  BathSpec bath;
  NoiseModel noise;
  long shots = 8192;  // 0 = exact channel probabilities
  std::uint64_t seed = 0;
  MitigationSpec mitigation;
  std::string output_path;

  // When set, the ideal dynamics (gates and collision channel) are conjugated
  // by X on every system qubit and the reported outcome labels are bit
  // complemented. Noise channels are untouched, so noiseless traces are
  // unchanged while asymmetric noise is weighted differently.
  bool bitflip_conjugated = false;

  void validate() const;
};

// One full step: Trotter gates (each followed by its depolarizing channel),
// then the collision channel, then per-qubit amplitude decay.
DensityMatrix evolve_step(const DensityMatrix& rho, const ModelSpec& model, const BathSpec& bath,
                          const NoiseModel& noise);

// Populations for n = 0..model.steps with the bath folded into a system-only
// channel (ancillas are never materialized). shots = 0 records exact channel
// probabilities; otherwise each row is multinomially sampled.
PopulationTrace run_experiment(const ExperimentConfig& config);

// Cross-validation path: the same protocol with explicit ancilla wires,
// mid-circuit resets, and a final partial trace (at most 4 qubits total).
// Rejects gate/decay noise and bitflip conjugation; readout flips and
// sampling behave as in run_experiment.
PopulationTrace run_experiment_dilated(const ExperimentConfig& config);

// Multinomial draw from diag(rho) with per-shot readout flips, keyed by
// bitstring. Deterministic in (rho, shots, seed, readout).
std::map<std::string, long> sample_counts(const DensityMatrix& rho, long shots,
                                          std::uint64_t seed,
                                          const std::vector<std::pair<double, double>>& readout);

// Deterministic 53-bit uniform stream. Every sampling consumer derives its
// per-step generator from (run seed, step index) via mix_seed, which keeps
// traces byte-reproducible and step sampling order-independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace hubsim
