// circuit.cpp — gate matrices, unitary lowering, and the text dump
#include "hubsim/circuit.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace hubsim {

namespace {

Matrix rotation(const Matrix& generator, double angle) {
  return matexp_unitary(generator, angle / 2.0).mat();
}

std::string format_angle(double angle) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", angle);
  return buf;
}

}  // namespace

int gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::X:
    case GateKind::H:
      return 1;
    case GateKind::RZZ:
    case GateKind::CNOT:
      return 2;
  }
  throw std::invalid_argument("gate_arity: unknown gate kind");
}

bool gate_has_angle(GateKind kind) {
  switch (kind) {
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
    case GateKind::RZZ:
      return true;
    case GateKind::CNOT:
    case GateKind::X:
    case GateKind::H:
      return false;
  }
  throw std::invalid_argument("gate_has_angle: unknown gate kind");
}

const char* gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::RX: return "rx";
    case GateKind::RY: return "ry";
    case GateKind::RZ: return "rz";
    case GateKind::RZZ: return "rzz";
    case GateKind::CNOT: return "cnot";
    case GateKind::X: return "x";
    case GateKind::H: return "h";
  }
  throw std::invalid_argument("gate_name: unknown gate kind");
}

Gate make_gate(GateKind kind, std::vector<int> targets, std::optional<double> angle) {
  if (static_cast<int>(targets.size()) != gate_arity(kind)) {
    throw std::invalid_argument("make_gate: target count does not match gate arity");
  }
  if (targets.size() == 2 && targets[0] == targets[1]) {
    throw std::invalid_argument("make_gate: duplicate target qubit");
  }
  for (int t : targets) {
    if (t < 0) throw std::invalid_argument("make_gate: negative target qubit");
  }
  if (gate_has_angle(kind)) {
    if (!angle || !std::isfinite(*angle)) {
      throw std::invalid_argument("make_gate: rotation gate needs a finite angle");
    }
  } else if (angle) {
    throw std::invalid_argument("make_gate: gate kind takes no angle");
  }
  return Gate{kind, std::move(targets), angle};
}

ResetOp reset_to_zero(int target) { return ResetOp{target, DensityMatrix::basis_state(1, 0)}; }

ResetOp reset_to_plus(int target) {
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  return ResetOp{target, DensityMatrix::from_pure(1, plus)};
}

ResetOp reset_to_mixed(int target, DensityMatrix prep) {
  if (prep.num_qubits() != 1) {
    throw std::invalid_argument("reset_to_mixed: prep state must be a single qubit");
  }
  return ResetOp{target, std::move(prep)};
}

Circuit::Circuit(int nq) : num_qubits(nq) {
  if (nq < 1 || nq > kMaxQubits) {
    throw std::invalid_argument("Circuit: qubit count out of range");
  }
}

namespace {

void check_in_range(const Circuit& c, const std::vector<int>& targets) {
  for (int t : targets) {
    if (t >= c.num_qubits) {
      throw std::invalid_argument("Circuit: target qubit out of range");
    }
  }
}

}  // namespace

Circuit& Circuit::rx(int q, double angle) {
  Gate g = make_gate(GateKind::RX, {q}, angle);
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::ry(int q, double angle) {
  Gate g = make_gate(GateKind::RY, {q}, angle);
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::rz(int q, double angle) {
  Gate g = make_gate(GateKind::RZ, {q}, angle);
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::rzz(int a, int b, double angle) {
  Gate g = make_gate(GateKind::RZZ, {a, b}, angle);
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::cnot(int control, int target) {
  Gate g = make_gate(GateKind::CNOT, {control, target});
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::x(int q) {
  Gate g = make_gate(GateKind::X, {q});
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::h(int q) {
  Gate g = make_gate(GateKind::H, {q});
  check_in_range(*this, g.targets);
  instructions.emplace_back(std::move(g));
  return *this;
}

Circuit& Circuit::reset(ResetOp op) {
  if (op.target < 0 || op.target >= num_qubits) {
    throw std::invalid_argument("Circuit: reset target out of range");
  }
  instructions.emplace_back(std::move(op));
  return *this;
}

Circuit& Circuit::barrier() {
  instructions.emplace_back(Barrier{});
  return *this;
}

Circuit& Circuit::append(const Circuit& fragment) {
  if (fragment.num_qubits != num_qubits) {
    throw std::invalid_argument("Circuit::append: qubit counts differ");
  }
  instructions.insert(instructions.end(), fragment.instructions.begin(),
                      fragment.instructions.end());
  return *this;
}

int Circuit::gate_count() const {
  int n = 0;
  for (const Instruction& ins : instructions) {
    if (std::holds_alternative<Gate>(ins)) ++n;
  }
  return n;
}

Operator gate_matrix(const Gate& gate) {
  switch (gate.kind) {
    case GateKind::RX:
      return Operator::unitary(rotation(pauli_x(), *gate.angle));
    case GateKind::RY:
      return Operator::unitary(rotation(pauli_y(), *gate.angle));
    case GateKind::RZ:
      return Operator::unitary(rotation(pauli_z(), *gate.angle));
    case GateKind::RZZ:
      return Operator::unitary(rotation(kron(pauli_z(), pauli_z()), *gate.angle));
    case GateKind::CNOT: {
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = 1;
      m(1, 1) = 1;
      m(2, 3) = 1;
      m(3, 2) = 1;
      return Operator::unitary(std::move(m));
    }
    case GateKind::X:
      return Operator::unitary(pauli_x());
    case GateKind::H: {
      Matrix m(2, 2);
      const double s = 1.0 / std::sqrt(2.0);
      m << s, s, s, -s;
      return Operator::unitary(std::move(m));
    }
  }
  throw std::invalid_argument("gate_matrix: unknown gate kind");
}

Operator circuit_unitary(const Circuit& circuit) {
  const Eigen::Index dim = Eigen::Index{1} << circuit.num_qubits;
  Matrix u = identity(dim);
  for (const Instruction& ins : circuit.instructions) {
    if (std::holds_alternative<Barrier>(ins)) continue;
    if (std::holds_alternative<ResetOp>(ins)) {
      throw std::invalid_argument("circuit_unitary: circuit contains a reset");
    }
    const Gate& g = std::get<Gate>(ins);
    u = embed(gate_matrix(g), g.targets, circuit.num_qubits).mat() * u;
  }
  return Operator::unitary(std::move(u));
}

std::string dump(const Circuit& circuit) {
  std::string out = "qubits: " + std::to_string(circuit.num_qubits) + "\n";
  for (const Instruction& ins : circuit.instructions) {
    if (const Gate* g = std::get_if<Gate>(&ins)) {
      out += gate_name(g->kind);
      if (g->angle) {
        out += "(" + format_angle(*g->angle) + ")";
      }
      for (int t : g->targets) {
        out += " q" + std::to_string(t);
      }
      out += "\n";
    } else if (const ResetOp* r = std::get_if<ResetOp>(&ins)) {
      const Matrix& p = r->prep.mat();
      std::string label = "mixed";
      if (std::abs(p(0, 0).real() - 1.0) < 1e-12) {
        label = "zero";
      } else if (std::abs(p(0, 1).real() - 0.5) < 1e-12 && std::abs(p(0, 0).real() - 0.5) < 1e-12) {
        label = "plus";
      }
      out += "reset q" + std::to_string(r->target) + " " + label + "\n";
    } else {
      out += "barrier\n";
    }
  }
  return out;
}

}  // namespace hubsim
