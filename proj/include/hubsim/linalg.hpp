// linalg.hpp — dense complex operators, density matrices, and Kraus channels
#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace hubsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Global convention: qubit 0 is the MOST significant bit of every basis index,
// so an n-qubit register is indexed by i = q0*2^(n-1) + q1*2^(n-2) + ... + q(n-1).

inline constexpr int kMaxQubits = 6;            // dense kernels stop at 64x64
inline constexpr double kUnitaryTol = 1e-12;    // max |U†U - I|
inline constexpr double kHermitianTol = 1e-12;  // max |H - H†|
inline constexpr double kTraceOneTol = 1e-10;   // |tr(rho) - 1|
inline constexpr double kPsdFloor = -1e-10;     // eigenvalue floor for states and Choi
inline constexpr double kCompletenessTol = 1e-10;

// ------------------------------ fixed matrices ------------------------------

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix identity(Eigen::Index dim);

// Largest |entry| of m; zero-size matrices give 0.
double max_abs(const Matrix& m);

bool is_unitary(const Matrix& m, double tol = kUnitaryTol);
bool is_hermitian(const Matrix& m, double tol = kHermitianTol);

// ------------------------------ Operator ------------------------------

enum class OperatorTag { General, Unitary, Hermitian };

// Square matrix with a construction-time tag. The tagged factories validate,
// so a value tagged Unitary always satisfies max|U†U - I| <= kUnitaryTol.
class Operator {
 public:
  static Operator general(Matrix m);
  static Operator unitary(Matrix m);
  static Operator hermitian(Matrix m);

  const Matrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }
  OperatorTag tag() const { return tag_; }

 private:
  Operator(Matrix m, OperatorTag tag);

  Matrix mat_;
  OperatorTag tag_;
};

// ------------------------------ DensityMatrix ------------------------------

// Validated quantum state: hermitian, unit trace within kTraceOneTol, and no
// eigenvalue below kPsdFloor.
class DensityMatrix {
 public:
  static DensityMatrix basis_state(int num_qubits, int index);
  static DensityMatrix from_pure(int num_qubits, const Vector& amplitudes);
  static DensityMatrix from_matrix(int num_qubits, Matrix rho);

  const Matrix& mat() const { return rho_; }
  int num_qubits() const { return num_qubits_; }
  Eigen::Index dim() const { return rho_.rows(); }

  // Diagonal as real probabilities. Entries in [kPsdFloor, 0) clamp to 0;
  // anything below kPsdFloor throws.
  std::vector<double> populations() const;

 private:
  DensityMatrix(int num_qubits, Matrix rho);

  int num_qubits_;
  Matrix rho_;
};

// ------------------------------ core operations ------------------------------

// Tensor product; a acts on the more significant block. Unitary (resp.
// hermitian) tags survive when both factors carry them.
Operator kron(const Operator& a, const Operator& b);
Matrix kron(const Matrix& a, const Matrix& b);
DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b);

// exp(-i*h*t) through a hermitian eigendecomposition; h must be hermitian
// within kHermitianTol and no larger than 64x64. This is also the exact
// propagator oracle used by the tests.
Operator matexp_unitary(const Matrix& h, double t);

// Expand u (acting on `targets`, in the given order) to num_qubits qubits.
// Rejects duplicate or out-of-range targets and dimension mismatches.
Operator embed(const Operator& u, const std::vector<int>& targets, int num_qubits);

// U rho U†.
DensityMatrix apply_unitary(const DensityMatrix& rho, const Operator& u);

// Trace out `discard`; surviving qubits keep their relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& discard);

// Trace out `target` and put the 1-qubit state `prep` in its place
// (measure-and-discard reset; correlations with `target` are destroyed).
DensityMatrix reset_qubit(const DensityMatrix& rho, int target, const DensityMatrix& prep);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

// ------------------------------ Kraus channels ------------------------------

struct KrausChannel {
  Eigen::Index dim = 0;
  std::vector<Matrix> ops;

  // Validates shapes, completeness (sum K†K = I within kCompletenessTol) and
  // Choi positivity (min eigenvalue >= kPsdFloor).
  static KrausChannel from_ops(Eigen::Index dim, std::vector<Matrix> ops);
};

// Choi matrix C = sum_k vec(K_k) vec(K_k)†, row-major vec.
Matrix choi_matrix(const KrausChannel& channel);

// Throws unless the channel is complete and its Choi matrix is positive
// within the module tolerances.
void validate_channel(const KrausChannel& channel);

// sum_k K rho K†; re-validates the channel before applying.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel);

// Kraus set of rho_sys -> tr_bath[ u (rho_sys ⊗ bath_state) u† ]. System
// qubits occupy the most significant bits of u's index space, bath qubits the
// least significant. Bath eigenvectors with weight below 1e-14 are dropped.
KrausChannel channel_from_dilation(const Operator& u, const DensityMatrix& bath_state,
                                   int system_qubits);

// ------------------------------ bit helpers ------------------------------

// Bit of `qubit` inside `index` under the qubit-0-MSB convention.
inline int bit_at(int index, int qubit, int num_qubits) {
  return (index >> (num_qubits - 1 - qubit)) & 1;
}

// Scatter the bits of `value` (MSB-first) onto the qubit positions in `slots`.
int scatter_bits(int value, const std::vector<int>& slots, int num_qubits);

}  // namespace hubsim
