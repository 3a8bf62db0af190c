// engine.cpp — noise channels, step kernels, runs, and sampling
#include "hubsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hubsim {

namespace {

void check_probability(double p, const char* name) {
  if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
    throw std::invalid_argument(std::string("NoiseModel: ") + name + " must lie in [0, 1]");
  }
}

// Depolarizing channel on `targets`: rho -> (1-p) rho + p I/2^m ⊗ tr_t rho,
// realized as the uniform Pauli mixture.
KrausChannel depolarizing_channel(double p, const std::vector<int>& targets, int num_qubits) {
  const int m = static_cast<int>(targets.size());
  const int npauli = 1 << (2 * m);
  const double keep = std::sqrt(1.0 - p + p / npauli);
  const double flip = std::sqrt(p / npauli);
  const Matrix paulis[4] = {identity(2), pauli_x(), pauli_y(), pauli_z()};
  std::vector<Matrix> ops;
  ops.reserve(static_cast<std::size_t>(npauli));
  for (int code = 0; code < npauli; ++code) {
    Matrix local = Matrix::Identity(1, 1);
    for (int k = 0; k < m; ++k) {
      local = kron(local, paulis[(code >> (2 * (m - 1 - k))) & 3]);
    }
    const double w = code == 0 ? keep : flip;
    ops.push_back(w * embed(Operator::general(std::move(local)), targets, num_qubits).mat());
  }
  return KrausChannel::from_ops(Eigen::Index{1} << num_qubits, std::move(ops));
}

KrausChannel amplitude_decay_channel(double gamma, int qubit, int num_qubits) {
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausChannel::from_ops(
      Eigen::Index{1} << num_qubits,
      {embed(Operator::general(std::move(k0)), {qubit}, num_qubits).mat(),
       embed(Operator::general(std::move(k1)), {qubit}, num_qubits).mat()});
}

struct NoisyGate {
  Operator unitary;
  std::optional<KrausChannel> depol;
};

// Everything one step applies, with the bath already traced out.
struct StepKernel {
  std::vector<NoisyGate> gates;
  std::optional<KrausChannel> collision;
  std::vector<KrausChannel> decay;

  DensityMatrix apply(DensityMatrix rho) const {
    for (const NoisyGate& g : gates) {
      rho = apply_unitary(rho, g.unitary);
      if (g.depol) rho = apply_channel(rho, *g.depol);
    }
    if (collision) rho = apply_channel(rho, *collision);
    for (const KrausChannel& ch : decay) {
      rho = apply_channel(rho, ch);
    }
    return rho;
  }
};

Operator conjugate_by_x_all(const Operator& u, int num_qubits) {
  Matrix xall = Matrix::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) xall = kron(xall, pauli_x());
  return Operator::unitary(xall * u.mat() * xall);
}

StepKernel build_kernel(const ModelSpec& model, const BathSpec& bath, const NoiseModel& noise,
                        bool bitflip) {
  const int nq = model.num_qubits();
  StepKernel kernel;
  for (const Instruction& ins : trotter_step_circuit(model).instructions) {
    const Gate& g = std::get<Gate>(ins);
    Operator u = embed(gate_matrix(g), g.targets, nq);
    if (bitflip) u = conjugate_by_x_all(u, nq);
    const double p =
        g.targets.size() == 2 ? noise.depolarizing_2q : noise.depolarizing_1q;
    std::optional<KrausChannel> depol;
    if (p > 0.0) depol = depolarizing_channel(p, g.targets, nq);
    kernel.gates.push_back(NoisyGate{std::move(u), std::move(depol)});
  }
  if (bath.coupling != BathCoupling::None) {
    KrausChannel ch = collision_channel(bath, nq);
    if (bitflip) {
      Matrix xall = Matrix::Identity(1, 1);
      for (int q = 0; q < nq; ++q) xall = kron(xall, pauli_x());
      for (Matrix& k : ch.ops) k = xall * k * xall;
    }
    kernel.collision = std::move(ch);
  }
  if (noise.amplitude_decay_per_step > 0.0) {
    for (int q = 0; q < nq; ++q) {
      kernel.decay.push_back(amplitude_decay_channel(noise.amplitude_decay_per_step, q, nq));
    }
  }
  return kernel;
}

// Sampled outcomes before any label permutation.
std::vector<long> sample_vector(const DensityMatrix& rho, long shots, Rng& rng,
                                const std::vector<std::pair<double, double>>& readout) {
  const int nq = rho.num_qubits();
  if (!readout.empty() && static_cast<int>(readout.size()) != nq) {
    throw std::invalid_argument("sampling: readout table size does not match qubit count");
  }
  std::vector<double> p = rho.populations();
  double total = 0.0;
  for (double v : p) total += v;
  if (total <= 0.0) {
    throw std::runtime_error("sampling: state has no probability mass");
  }
  std::vector<long> counts(p.size(), 0);
  for (long s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    double acc = 0.0;
    int outcome = static_cast<int>(p.size()) - 1;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) {
        outcome = static_cast<int>(i);
        break;
      }
    }
    if (!readout.empty()) {
      for (int q = 0; q < nq; ++q) {
        const int bit = bit_at(outcome, q, nq);
        const double flip = bit == 0 ? readout[static_cast<std::size_t>(q)].first
                                     : readout[static_cast<std::size_t>(q)].second;
        if (flip > 0.0 && rng.uniform() < flip) {
          outcome ^= 1 << (nq - 1 - q);
        }
      }
    }
    ++counts[static_cast<std::size_t>(outcome)];
  }
  return counts;
}

int complement_index(int index, int num_qubits) { return ~index & ((1 << num_qubits) - 1); }

struct TraceRow {
  std::vector<double> row;
  std::vector<long> counts;  // empty in exact mode
};

TraceRow compute_row(const DensityMatrix& rho, long shots, std::uint64_t step_seed,
                     const std::vector<std::pair<double, double>>& readout, bool relabel) {
  const int nq = rho.num_qubits();
  const int dim = 1 << nq;
  TraceRow out;
  if (shots == 0) {
    const std::vector<double> p = rho.populations();
    out.row.resize(p.size());
    for (int i = 0; i < dim; ++i) {
      out.row[static_cast<std::size_t>(relabel ? complement_index(i, nq) : i)] =
          p[static_cast<std::size_t>(i)];
    }
    return out;
  }
  Rng rng(step_seed);
  const std::vector<long> raw = sample_vector(rho, shots, rng, readout);
  out.counts.assign(raw.size(), 0);
  for (int i = 0; i < dim; ++i) {
    out.counts[static_cast<std::size_t>(relabel ? complement_index(i, nq) : i)] =
        raw[static_cast<std::size_t>(i)];
  }
  out.row.resize(out.counts.size());
  for (std::size_t i = 0; i < out.counts.size(); ++i) {
    out.row[i] = static_cast<double>(out.counts[i]) / static_cast<double>(shots);
  }
  return out;
}

void record_row(PopulationTrace& trace, const DensityMatrix& rho, long shots,
                std::uint64_t step_seed,
                const std::vector<std::pair<double, double>>& readout, bool relabel) {
  TraceRow r = compute_row(rho, shots, step_seed, readout, relabel);
  trace.rows.push_back(std::move(r.row));
  if (shots > 0) trace.counts.push_back(std::move(r.counts));
}

}  // namespace

void NoiseModel::validate() const {
  check_probability(depolarizing_1q, "depolarizing_1q");
  check_probability(depolarizing_2q, "depolarizing_2q");
  check_probability(amplitude_decay_per_step, "amplitude_decay_per_step");
  for (const auto& [p01, p10] : readout_flip) {
    check_probability(p01, "readout_flip");
    check_probability(p10, "readout_flip");
  }
}

bool NoiseModel::trivial() const {
  if (depolarizing_1q > 0.0 || depolarizing_2q > 0.0 || amplitude_decay_per_step > 0.0) {
    return false;
  }
  for (const auto& [p01, p10] : readout_flip) {
    if (p01 > 0.0 || p10 > 0.0) return false;
  }
  return true;
}

std::vector<std::pair<double, double>> NoiseModel::readout_for(int num_qubits) const {
  if (readout_flip.empty()) {
    return {};
  }
  if (readout_flip.size() == 1) {
    return std::vector<std::pair<double, double>>(static_cast<std::size_t>(num_qubits),
                                                  readout_flip.front());
  }
  if (static_cast<int>(readout_flip.size()) != num_qubits) {
    throw std::invalid_argument("NoiseModel: readout_flip needs one entry, or one per qubit");
  }
  return readout_flip;
}

void ExperimentConfig::validate() const {
  model.validate();
  bath.validate();
  noise.validate();
  noise.readout_for(model.num_qubits());
  init.density_matrix(model);
  if (shots < 0) {
    throw std::invalid_argument("ExperimentConfig: shots must be nonnegative");
  }
  if (shots == 0 && (mitigation.readout || mitigation.bitflip)) {
    throw std::invalid_argument(
        "ExperimentConfig: readout and bitflip mitigation need sampled runs (shots > 0)");
  }
  if (mitigation.zne) {
    const ZneSpec& z = *mitigation.zne;
    if (z.order < 1) {
      throw std::invalid_argument("ExperimentConfig: zne order must be at least 1");
    }
    if (static_cast<int>(z.scales.size()) < z.order + 1) {
      throw std::invalid_argument("ExperimentConfig: zne needs order+1 scales");
    }
    for (std::size_t i = 0; i < z.scales.size(); ++i) {
      if (z.scales[i] < 1) {
        throw std::invalid_argument("ExperimentConfig: zne scales must be positive integers");
      }
      for (std::size_t j = i + 1; j < z.scales.size(); ++j) {
        if (z.scales[i] == z.scales[j]) {
          throw std::invalid_argument("ExperimentConfig: zne scales must be distinct");
        }
      }
    }
  }
  if (mitigation.calibration_shots <= 0) {
    throw std::invalid_argument("ExperimentConfig: calibration_shots must be positive");
  }
}

DensityMatrix evolve_step(const DensityMatrix& rho, const ModelSpec& model, const BathSpec& bath,
                          const NoiseModel& noise) {
  model.validate();
  bath.validate();
  noise.validate();
  if (rho.num_qubits() != model.num_qubits()) {
    throw std::invalid_argument("evolve_step: state does not match the model's qubit count");
  }
  return build_kernel(model, bath, noise, false).apply(rho);
}

PopulationTrace run_experiment(const ExperimentConfig& config) {
  config.validate();
  const int nq = config.model.num_qubits();
  const StepKernel kernel =
      build_kernel(config.model, config.bath, config.noise, config.bitflip_conjugated);
  DensityMatrix rho = config.init.density_matrix(config.model);
  if (config.bitflip_conjugated) {
    Matrix xall = Matrix::Identity(1, 1);
    for (int q = 0; q < nq; ++q) xall = kron(xall, pauli_x());
    rho = apply_unitary(rho, Operator::unitary(xall));
  }
  const auto readout = config.noise.readout_for(nq);

  std::vector<DensityMatrix> states;
  states.reserve(static_cast<std::size_t>(config.model.steps) + 1);
  states.push_back(rho);
  for (int n = 1; n <= config.model.steps; ++n) {
    rho = kernel.apply(std::move(rho));
    states.push_back(rho);
  }

  // One independent seed stream per row: the sampled trace is a pure function
  // of (config, seed) however callers schedule whole runs.
  const int num_rows = static_cast<int>(states.size());
  std::vector<TraceRow> rows(static_cast<std::size_t>(num_rows));
  for (int n = 0; n < num_rows; ++n) {
    rows[static_cast<std::size_t>(n)] =
        compute_row(states[static_cast<std::size_t>(n)], config.shots,
                    mix_seed(config.seed, static_cast<std::uint64_t>(n)), readout,
                    config.bitflip_conjugated);
  }

  PopulationTrace trace;
  trace.labels = basis_labels(nq);
  trace.shots = config.shots;
  for (TraceRow& r : rows) {
    trace.rows.push_back(std::move(r.row));
    if (config.shots > 0) trace.counts.push_back(std::move(r.counts));
  }
  return trace;
}

PopulationTrace run_experiment_dilated(const ExperimentConfig& config) {
  config.validate();
  if (config.noise.depolarizing_1q > 0.0 || config.noise.depolarizing_2q > 0.0 ||
      config.noise.amplitude_decay_per_step > 0.0) {
    throw std::invalid_argument("run_experiment_dilated: gate and decay noise are not supported");
  }
  if (config.bitflip_conjugated) {
    throw std::invalid_argument("run_experiment_dilated: bitflip conjugation is not supported");
  }
  const int nq = config.model.num_qubits();
  const bool has_bath = config.bath.coupling != BathCoupling::None;
  const int bath_count =
      !has_bath ? 0 : (config.bath.topology == BathTopology::Common ? 1 : nq);
  const int total = nq + bath_count;
  if (total > 4) {
    throw std::invalid_argument("run_experiment_dilated: more than 4 qubits");
  }

  // System wires first, ancilla wires after.
  std::vector<Operator> step_gates;
  for (const Instruction& ins : trotter_step_circuit(config.model).instructions) {
    const Gate& g = std::get<Gate>(ins);
    step_gates.push_back(embed(gate_matrix(g), g.targets, total));
  }
  if (has_bath) {
    for (int q = 0; q < nq; ++q) {
      const int bq = config.bath.topology == BathTopology::Common ? nq : nq + q;
      for (const Instruction& ins : collision_circuit(config.bath, q, bq).instructions) {
        const Gate& g = std::get<Gate>(ins);
        step_gates.push_back(embed(gate_matrix(g), g.targets, total));
      }
    }
  }

  DensityMatrix rho = config.init.density_matrix(config.model);
  std::vector<int> bath_wires;
  if (has_bath) {
    const DensityMatrix prep = bath_prep_state(config.bath);
    for (int b = 0; b < bath_count; ++b) {
      rho = kron(rho, prep);
      bath_wires.push_back(nq + b);
    }
  }
  const auto readout = config.noise.readout_for(nq);

  PopulationTrace trace;
  trace.labels = basis_labels(nq);
  trace.shots = config.shots;
  auto system_state = [&]() {
    return has_bath ? partial_trace(rho, bath_wires) : rho;
  };
  record_row(trace, system_state(), config.shots, mix_seed(config.seed, 0), readout, false);
  for (int n = 1; n <= config.model.steps; ++n) {
    for (const Operator& u : step_gates) {
      rho = apply_unitary(rho, u);
    }
    if (has_bath) {
      const DensityMatrix prep = bath_prep_state(config.bath);
      for (int w : bath_wires) {
        rho = reset_qubit(rho, w, prep);
      }
    }
    record_row(trace, system_state(), config.shots, mix_seed(config.seed, static_cast<std::uint64_t>(n)),
               readout, false);
  }
  return trace;
}

std::map<std::string, long> sample_counts(const DensityMatrix& rho, long shots,
                                          std::uint64_t seed,
                                          const std::vector<std::pair<double, double>>& readout) {
  if (shots <= 0) {
    throw std::invalid_argument("sample_counts: shots must be positive");
  }
  std::vector<std::pair<double, double>> table = readout;
  if (table.size() == 1 && rho.num_qubits() > 1) {
    table.assign(static_cast<std::size_t>(rho.num_qubits()), readout.front());
  }
  Rng rng(seed);
  const std::vector<long> counts = sample_vector(rho, shots, rng, table);
  const int nq = rho.num_qubits();
  std::map<std::string, long> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::string bits(static_cast<std::size_t>(nq), '0');
    for (int q = 0; q < nq; ++q) {
      if (bit_at(static_cast<int>(i), q, nq)) bits[static_cast<std::size_t>(q)] = '1';
    }
    out[bits] = counts[i];
  }
  return out;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace hubsim
