// hubbard.hpp — two-site model: Hamiltonians, Trotter circuits, exact references
#pragma once

#include <optional>
#include <vector>

#include "hubsim/circuit.hpp"
#include "hubsim/linalg.hpp"
#include "hubsim/trace.hpp"

namespace hubsim {

// All couplings enter as dimensionless products with the step size, so the
// internal step is always 1: eps_dt = eps*dt and so on.
enum class Filling { OneElectron, TwoElectron };

struct ModelSpec {
  Filling filling = Filling::OneElectron;
  double eps_dt = 0.0;   // on-site bias (one-electron sector only)
  double t12_dt = 0.0;   // hopping
  double uc_dt = 0.0;    // on-site repulsion (two-electron sector only)
  int steps = 0;

  // Finite couplings with |value| < 4*pi, steps in [0, 100000]. The
  // two-electron sector requires eps_dt == 0, the one-electron sector
  // uc_dt == 0.
  void validate() const;

  int num_qubits() const { return filling == Filling::OneElectron ? 1 : 2; }
};

// One-electron basis: |0> = electron on site 1, |1> = electron on site 2.
// Two-electron (Sz = 0) basis: |00> = both on site 1, |01>, |10> = one per
// site, |11> = both on site 2.
class InitialState {
 public:
  enum class Kind { Site1, Site2, DoubleSite1, DoubleSite2, Singlet, Custom };

  static InitialState site1();
  static InitialState site2();
  static InitialState double_site1();
  static InitialState double_site2();
  static InitialState singlet();  // (|01> - |10>)/sqrt(2)
  static InitialState custom(DensityMatrix rho);

  Kind kind() const { return kind_; }
  const char* name() const;

  // Throws when the kind does not fit the filling's qubit count.
  DensityMatrix density_matrix(const ModelSpec& model) const;

 private:
  explicit InitialState(Kind kind) : kind_(kind) {}

  Kind kind_;
  std::optional<DensityMatrix> custom_;
};

// One-electron: eps*sz + t12*sx. Two-electron: t12*(sx⊗1 + 1⊗sx) +
// (uc/2)*(sz⊗sz), with the products standing in for the bare couplings.
Operator hamiltonian(const ModelSpec& model);

// First-order split step, hopping block first:
//   one-electron: RX(2*t12_dt) q0, RZ(2*eps_dt) q0
//   two-electron: RX(2*t12_dt) q0, RX(2*t12_dt) q1,
//                 CNOT q0 q1, RZ(uc_dt) q1, CNOT q0 q1
Circuit trotter_step_circuit(const ModelSpec& model);

// circuit_unitary(trotter_step_circuit(model)).
Operator trotter_step_unitary(const ModelSpec& model);

// Exact state exp(-iHt) rho0 exp(iHt) at arbitrary real t (the propagator
// oracle; integer steps sit at t = n).
DensityMatrix exact_state(const ModelSpec& model, const InitialState& init, double time);

// Diagonal of the exact state after n unit steps.
std::vector<double> exact_populations(const ModelSpec& model, const InitialState& init, int n);

// Populations of rho0 under repeated application of the Trotter step, rows
// n = 0..model.steps. Exact linear algebra: no sampling, no noise.
PopulationTrace trotterized_populations(const ModelSpec& model, const InitialState& init);

// Derived scales of the two-site model. pair_freq = 4*t12^2/uc (needs
// uc_dt > 0), fast_freq = uc, effective_hopping = t12^2/eps (needs
// eps_dt != 0); the accessors throw naming the missing parameter.
struct CharacteristicFrequencies {
  std::optional<double> pair_freq_dt;
  double fast_freq_dt = 0.0;
  std::optional<double> effective_hopping_dt;

  double pair() const;
  double hopping() const;
};

CharacteristicFrequencies characteristic_frequencies(const ModelSpec& model);

}  // namespace hubsim
