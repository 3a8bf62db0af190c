// hubbard.cpp — model Hamiltonians, Trotter step circuits, exact references
#include "hubsim/hubbard.hpp"

#include <cmath>
#include <stdexcept>

namespace hubsim {

namespace {

constexpr double kCouplingWindow = 4.0 * M_PI;

void check_coupling(double value, const char* name) {
  if (!std::isfinite(value) || std::abs(value) >= kCouplingWindow) {
    throw std::invalid_argument(std::string("ModelSpec: ") + name +
                                " must be finite with magnitude below 4*pi");
  }
}

}  // namespace

void ModelSpec::validate() const {
  check_coupling(eps_dt, "eps_dt");
  check_coupling(t12_dt, "t12_dt");
  check_coupling(uc_dt, "uc_dt");
  if (steps < 0 || steps > 100000) {
    throw std::invalid_argument("ModelSpec: steps out of range");
  }
  if (filling == Filling::TwoElectron && eps_dt != 0.0) {
    throw std::invalid_argument("ModelSpec: the two-electron sector requires eps_dt = 0");
  }
  if (filling == Filling::OneElectron && uc_dt != 0.0) {
    throw std::invalid_argument("ModelSpec: uc_dt applies only to the two-electron sector");
  }
}

InitialState InitialState::site1() { return InitialState(Kind::Site1); }
InitialState InitialState::site2() { return InitialState(Kind::Site2); }
InitialState InitialState::double_site1() { return InitialState(Kind::DoubleSite1); }
InitialState InitialState::double_site2() { return InitialState(Kind::DoubleSite2); }

InitialState InitialState::singlet() { return InitialState(Kind::Singlet); }

InitialState InitialState::custom(DensityMatrix rho) {
  InitialState s(Kind::Custom);
  s.custom_ = std::move(rho);
  return s;
}

const char* InitialState::name() const {
  switch (kind_) {
    case Kind::Site1: return "site1";
    case Kind::Site2: return "site2";
    case Kind::DoubleSite1: return "double_site1";
    case Kind::DoubleSite2: return "double_site2";
    case Kind::Singlet: return "singlet";
    case Kind::Custom: return "custom";
  }
  return "?";
}

DensityMatrix InitialState::density_matrix(const ModelSpec& model) const {
  const int nq = model.num_qubits();
  switch (kind_) {
    case Kind::Site1:
    case Kind::Site2:
      if (nq != 1) {
        throw std::invalid_argument("InitialState: one-electron state used with two-electron model");
      }
      return DensityMatrix::basis_state(1, kind_ == Kind::Site1 ? 0 : 1);
    case Kind::DoubleSite1:
    case Kind::DoubleSite2:
      if (nq != 2) {
        throw std::invalid_argument("InitialState: two-electron state used with one-electron model");
      }
      return DensityMatrix::basis_state(2, kind_ == Kind::DoubleSite1 ? 0 : 3);
    case Kind::Singlet: {
      if (nq != 2) {
        throw std::invalid_argument("InitialState: singlet needs the two-electron model");
      }
      Vector amps = Vector::Zero(4);
      amps(1) = 1.0 / std::sqrt(2.0);
      amps(2) = -1.0 / std::sqrt(2.0);
      return DensityMatrix::from_pure(2, amps);
    }
    case Kind::Custom:
      if (custom_->num_qubits() != nq) {
        throw std::invalid_argument("InitialState: custom state has the wrong qubit count");
      }
      return *custom_;
  }
  throw std::logic_error("InitialState: unknown kind");
}

Operator hamiltonian(const ModelSpec& model) {
  model.validate();
  if (model.filling == Filling::OneElectron) {
    return Operator::hermitian(model.eps_dt * pauli_z() + model.t12_dt * pauli_x());
  }
  Matrix h = model.t12_dt * (kron(identity(2), pauli_x()) + kron(pauli_x(), identity(2))) +
             0.5 * model.uc_dt * kron(pauli_z(), pauli_z());
  return Operator::hermitian(std::move(h));
}

Circuit trotter_step_circuit(const ModelSpec& model) {
  model.validate();
  if (model.filling == Filling::OneElectron) {
    Circuit c(1);
    c.rx(0, 2.0 * model.t12_dt).rz(0, 2.0 * model.eps_dt);
    return c;
  }
  Circuit c(2);
  c.rx(0, 2.0 * model.t12_dt)
      .rx(1, 2.0 * model.t12_dt)
      .cnot(0, 1)
      .rz(1, model.uc_dt)
      .cnot(0, 1);
  return c;
}

Operator trotter_step_unitary(const ModelSpec& model) {
  return circuit_unitary(trotter_step_circuit(model));
}

DensityMatrix exact_state(const ModelSpec& model, const InitialState& init, double time) {
  const Operator u = matexp_unitary(hamiltonian(model).mat(), time);
  return apply_unitary(init.density_matrix(model), u);
}

std::vector<double> exact_populations(const ModelSpec& model, const InitialState& init, int n) {
  if (n < 0) {
    throw std::invalid_argument("exact_populations: negative step count");
  }
  return exact_state(model, init, static_cast<double>(n)).populations();
}

PopulationTrace trotterized_populations(const ModelSpec& model, const InitialState& init) {
  const Operator step = trotter_step_unitary(model);
  DensityMatrix rho = init.density_matrix(model);
  PopulationTrace trace;
  trace.labels = basis_labels(model.num_qubits());
  trace.rows.push_back(rho.populations());
  for (int n = 1; n <= model.steps; ++n) {
    rho = apply_unitary(rho, step);
    trace.rows.push_back(rho.populations());
  }
  return trace;
}

double CharacteristicFrequencies::pair() const {
  if (!pair_freq_dt) {
    throw std::invalid_argument("characteristic_frequencies: pair frequency needs uc_dt > 0");
  }
  return *pair_freq_dt;
}

double CharacteristicFrequencies::hopping() const {
  if (!effective_hopping_dt) {
    throw std::invalid_argument("characteristic_frequencies: effective hopping needs eps_dt != 0");
  }
  return *effective_hopping_dt;
}

CharacteristicFrequencies characteristic_frequencies(const ModelSpec& model) {
  model.validate();
  CharacteristicFrequencies out;
  out.fast_freq_dt = model.uc_dt;
  if (model.uc_dt > 0.0) {
    out.pair_freq_dt = 4.0 * model.t12_dt * model.t12_dt / model.uc_dt;
  }
  if (model.eps_dt != 0.0) {
    out.effective_hopping_dt = model.t12_dt * model.t12_dt / model.eps_dt;
  }
  return out;
}

}  // namespace hubsim
