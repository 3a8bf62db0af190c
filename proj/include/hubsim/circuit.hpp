// circuit.hpp — minimal gate IR: typed instructions, unitary lowering, text dump
#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hubsim/linalg.hpp"

namespace hubsim {

// Rotation gates use the half-angle convention RX(a) = exp(-i*a*sx/2) (same
// for RY/RZ, and RZZ(a) = exp(-i*a*(sz⊗sz)/2)). CNOT's first target is the
// control.
enum class GateKind { RX, RY, RZ, RZZ, CNOT, X, H };

int gate_arity(GateKind kind);
bool gate_has_angle(GateKind kind);
const char* gate_name(GateKind kind);

struct Gate {
  GateKind kind = GateKind::X;
  std::vector<int> targets;
  std::optional<double> angle;
};

// Validates arity, angle presence, and target distinctness.
Gate make_gate(GateKind kind, std::vector<int> targets,
               std::optional<double> angle = std::nullopt);

// Mid-circuit reset: discard `target` and re-prepare it in `prep`.
struct ResetOp {
  int target = 0;
  DensityMatrix prep;
};

ResetOp reset_to_zero(int target);
ResetOp reset_to_plus(int target);
ResetOp reset_to_mixed(int target, DensityMatrix prep);

struct Barrier {};

using Instruction = std::variant<Gate, ResetOp, Barrier>;

struct Circuit {
  int num_qubits = 0;
  std::vector<Instruction> instructions;

  explicit Circuit(int num_qubits);

  Circuit& rx(int q, double angle);
  Circuit& ry(int q, double angle);
  Circuit& rz(int q, double angle);
  Circuit& rzz(int a, int b, double angle);
  Circuit& cnot(int control, int target);
  Circuit& x(int q);
  Circuit& h(int q);
  Circuit& reset(ResetOp op);
  Circuit& barrier();

  // Splice another circuit's instructions; qubit counts must match.
  Circuit& append(const Circuit& fragment);

  int gate_count() const;
};

// 2x2 or 4x4 unitary of a single gate.
Operator gate_matrix(const Gate& gate);

// Ordered product of the embedded gate matrices, first instruction applied
// first (so the result is matrix(last) * ... * matrix(first)). Barriers are
// skipped; ResetOp is not unitary and makes this throw.
Operator circuit_unitary(const Circuit& circuit);

// Stable one-instruction-per-line text form, usable as a golden string.
std::string dump(const Circuit& circuit);

}  // namespace hubsim
