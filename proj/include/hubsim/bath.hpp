// bath.hpp — collision-model spin baths: preparation, circuits, channels
#pragma once

#include "hubsim/circuit.hpp"
#include "hubsim/linalg.hpp"

namespace hubsim {

// ZZ coupling dephases (unital phase damping), XY coupling exchanges
// excitations with the ancilla (amplitude damping). One fresh or reset
// ancilla collides with the system once per step.
enum class BathCoupling { None, ZZ, XY };

// Common: every system qubit collides with one shared ancilla per step.
// PerQubit: each system qubit gets its own ancilla.
enum class BathTopology { Common, PerQubit };

// Reset reuses one ancilla wire and resets it after each collision; Fresh
// conceptually allocates a new ancilla per step. Both yield the same channel.
enum class BathMode { Reset, Fresh };

// The collision circuits are the defining convention. `Stated` instead
// matches the companion operator-action text, which differs from the circuits
// by a factor of two in the XY angle (ZZ is unaffected, both give a
// dephasing factor cos(g_dt)); it simply doubles g_dt for XY.
enum class AngleConvention { Circuit, Stated };

// Ancilla preparation: ground = lowest eigenstate of the bath Hamiltonian
// (-w*sx for ZZ giving |+>, -w*sz for XY giving |0>), thermal = Gibbs mixture
// of the two eigenstates at inverse temperature beta, entering via the
// product beta_omega. beta_omega = 0 is maximally mixed; large beta_omega
// approaches the ground state.
struct BathState {
  bool thermal = false;
  double beta_omega = 0.0;
};

struct BathSpec {
  BathCoupling coupling = BathCoupling::None;
  double g_dt = 0.0;
  BathTopology topology = BathTopology::PerQubit;
  BathMode mode = BathMode::Reset;
  BathState state;
  AngleConvention convention = AngleConvention::Circuit;

  void validate() const;

  // Collision angle after the convention is applied.
  double effective_g() const;
};

// 1-qubit ancilla state for one collision.
DensityMatrix bath_prep_state(const BathSpec& spec);

// One collision between system_qubit and bath_qubit, on max(s,b)+1 wires.
//   ZZ: CNOT(bath, system), RZ(g) system, CNOT(bath, system); the fragment
//       unitary equals exp(-i*(g/2)*sz⊗sz) on (system, bath).
//   XY: controlled-RY(g) with the system as control, then CNOT(bath, system).
//       The controlled rotation is expanded exactly as
//       RY(g/2) bath, CNOT(system, bath), RY(-g/2) bath, CNOT(system, bath).
Circuit collision_circuit(const BathSpec& spec, int system_qubit, int bath_qubit);

// The system-only channel of one step's worth of collisions (ancillas traced
// out). PerQubit tensors one single-qubit collision channel per system qubit;
// Common dilates the shared-ancilla circuit, colliding in ascending qubit
// order.
KrausChannel collision_channel(const BathSpec& spec, int system_qubits);

// n -> infinity state under repeated collisions alone, g_dt in (0, pi):
// ZZ fixes the maximally mixed state; XY with a ground ancilla decays to
// |0...0>. XY with a thermal ancilla is found by fixed-point iteration of the
// exact channel.
DensityMatrix damping_fixed_point(const BathSpec& spec, int system_qubits);

}  // namespace hubsim
