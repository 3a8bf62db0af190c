// bath.cpp — collision circuits and their traced-out channels
#include "hubsim/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace hubsim {

void BathSpec::validate() const {
  if (!std::isfinite(g_dt) || g_dt < 0.0 || g_dt >= 4.0 * M_PI) {
    throw std::invalid_argument("BathSpec: g_dt must be finite in [0, 4*pi)");
  }
  if (state.thermal && (!std::isfinite(state.beta_omega) || state.beta_omega < 0.0)) {
    throw std::invalid_argument("BathSpec: beta_omega must be finite and nonnegative");
  }
}

double BathSpec::effective_g() const {
  if (convention == AngleConvention::Stated && coupling == BathCoupling::XY) {
    return 2.0 * g_dt;
  }
  return g_dt;
}

DensityMatrix bath_prep_state(const BathSpec& spec) {
  spec.validate();
  if (spec.coupling == BathCoupling::None) {
    throw std::invalid_argument("bath_prep_state: no bath configured");
  }
  // Gibbs weight of the lower eigenstate: e^{bw} / (e^{bw} + e^{-bw}).
  const double p = spec.state.thermal ? 1.0 / (1.0 + std::exp(-2.0 * spec.state.beta_omega)) : 1.0;
  if (spec.coupling == BathCoupling::ZZ) {
    Matrix plus(2, 2), minus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    minus << 0.5, -0.5, -0.5, 0.5;
    return DensityMatrix::from_matrix(1, p * plus + (1.0 - p) * minus);
  }
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = p;
  rho(1, 1) = 1.0 - p;
  return DensityMatrix::from_matrix(1, std::move(rho));
}

Circuit collision_circuit(const BathSpec& spec, int system_qubit, int bath_qubit) {
  spec.validate();
  if (system_qubit == bath_qubit || system_qubit < 0 || bath_qubit < 0) {
    throw std::invalid_argument("collision_circuit: system and bath qubits must be distinct");
  }
  const double g = spec.effective_g();
  Circuit c(std::max(system_qubit, bath_qubit) + 1);
  switch (spec.coupling) {
    case BathCoupling::None:
      throw std::invalid_argument("collision_circuit: no bath configured");
    case BathCoupling::ZZ:
      c.cnot(bath_qubit, system_qubit).rz(system_qubit, g).cnot(bath_qubit, system_qubit);
      return c;
    case BathCoupling::XY:
      // Controlled-RY(g), control = system, target = bath, expanded exactly.
      c.ry(bath_qubit, g / 2.0)
          .cnot(system_qubit, bath_qubit)
          .ry(bath_qubit, -g / 2.0)
          .cnot(system_qubit, bath_qubit)
          .cnot(bath_qubit, system_qubit);
      return c;
  }
  throw std::logic_error("collision_circuit: unknown coupling");
}

namespace {

KrausChannel single_qubit_collision(const BathSpec& spec) {
  const Operator u = circuit_unitary(collision_circuit(spec, 0, 1));
  return channel_from_dilation(u, bath_prep_state(spec), 1);
}

}  // namespace

KrausChannel collision_channel(const BathSpec& spec, int system_qubits) {
  spec.validate();
  if (system_qubits < 1 || system_qubits > 3) {
    throw std::invalid_argument("collision_channel: system qubit count out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << system_qubits;
  if (spec.coupling == BathCoupling::None) {
    return KrausChannel::from_ops(dim, {identity(dim)});
  }
  if (system_qubits == 1) {
    return single_qubit_collision(spec);
  }
  if (spec.topology == BathTopology::PerQubit) {
    // Independent ancillas: the joint Kraus set is the tensor product of the
    // single-qubit sets.
    KrausChannel one = single_qubit_collision(spec);
    std::vector<Matrix> ops = one.ops;
    for (int q = 1; q < system_qubits; ++q) {
      std::vector<Matrix> next;
      next.reserve(ops.size() * one.ops.size());
      for (const Matrix& a : ops) {
        for (const Matrix& b : one.ops) {
          next.push_back(kron(a, b));
        }
      }
      ops = std::move(next);
    }
    return KrausChannel::from_ops(dim, std::move(ops));
  }
  // Common ancilla: splice one collision per system qubit onto a shared bath
  // wire (the last qubit), then trace it out.
  const int bath_qubit = system_qubits;
  Circuit joint(system_qubits + 1);
  for (int q = 0; q < system_qubits; ++q) {
    joint.append(collision_circuit(spec, q, bath_qubit));
  }
  return channel_from_dilation(circuit_unitary(joint), bath_prep_state(spec), system_qubits);
}

DensityMatrix damping_fixed_point(const BathSpec& spec, int system_qubits) {
  spec.validate();
  if (spec.coupling == BathCoupling::None) {
    throw std::invalid_argument("damping_fixed_point: no bath configured");
  }
  if (!(spec.g_dt > 0.0 && spec.g_dt < M_PI)) {
    throw std::invalid_argument("damping_fixed_point: g_dt must lie in (0, pi)");
  }
  if (system_qubits < 1 || system_qubits > 3) {
    throw std::invalid_argument("damping_fixed_point: system qubit count out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << system_qubits;
  if (spec.coupling == BathCoupling::ZZ) {
    // Unital: the maximally mixed state is fixed for any ancilla temperature.
    return DensityMatrix::from_matrix(system_qubits, Matrix::Identity(dim, dim) / double(dim));
  }
  if (!spec.state.thermal) {
    return DensityMatrix::basis_state(system_qubits, 0);
  }
  // Thermal XY: iterate the exact channel to its fixed point.
  const KrausChannel ch = collision_channel(spec, system_qubits);
  DensityMatrix rho =
      DensityMatrix::from_matrix(system_qubits, Matrix::Identity(dim, dim) / double(dim));
  for (int it = 0; it < 100000; ++it) {
    DensityMatrix next = apply_channel(rho, ch);
    const double delta = max_abs(next.mat() - rho.mat());
    rho = std::move(next);
    if (delta < 1e-14) return rho;
  }
  throw std::runtime_error("damping_fixed_point: fixed-point iteration did not converge");
}

}  // namespace hubsim
