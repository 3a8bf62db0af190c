// linalg.cpp — implementation of the dense state/operator/channel primitives
#include "hubsim/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace hubsim {

namespace {

bool power_of_two(Eigen::Index n) { return n > 0 && (n & (n - 1)) == 0; }

int qubits_for_dim(Eigen::Index dim, const char* what) {
  if (!power_of_two(dim)) {
    throw std::invalid_argument(std::string(what) + ": dimension is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

void check_square(const Matrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw std::invalid_argument(std::string(what) + ": matrix must be square and non-empty");
  }
}

void check_qubit_count(int num_qubits, const char* what) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument(std::string(what) + ": qubit count out of range");
  }
}

void check_targets(const std::vector<int>& targets, int num_qubits, const char* what) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= num_qubits) {
      throw std::invalid_argument(std::string(what) + ": target qubit out of range");
    }
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        throw std::invalid_argument(std::string(what) + ": duplicate target qubit");
      }
    }
  }
}

}  // namespace

// ------------------------------ fixed matrices ------------------------------

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Matrix identity(Eigen::Index dim) { return Matrix::Identity(dim, dim); }

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return max_abs(m.adjoint() * m - identity(m.rows())) <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0) return false;
  return max_abs(m - m.adjoint()) <= tol;
}

// ------------------------------ Operator ------------------------------

Operator::Operator(Matrix m, OperatorTag tag) : mat_(std::move(m)), tag_(tag) {}

Operator Operator::general(Matrix m) {
  check_square(m, "Operator::general");
  return Operator(std::move(m), OperatorTag::General);
}

Operator Operator::unitary(Matrix m) {
  check_square(m, "Operator::unitary");
  if (!is_unitary(m)) {
    throw std::invalid_argument("Operator::unitary: matrix is not unitary within tolerance");
  }
  return Operator(std::move(m), OperatorTag::Unitary);
}

Operator Operator::hermitian(Matrix m) {
  check_square(m, "Operator::hermitian");
  if (!is_hermitian(m)) {
    throw std::invalid_argument("Operator::hermitian: matrix is not hermitian within tolerance");
  }
  return Operator(std::move(m), OperatorTag::Hermitian);
}

// ------------------------------ DensityMatrix ------------------------------

DensityMatrix::DensityMatrix(int num_qubits, Matrix rho)
    : num_qubits_(num_qubits), rho_(std::move(rho)) {}

DensityMatrix DensityMatrix::basis_state(int num_qubits, int index) {
  check_qubit_count(num_qubits, "DensityMatrix::basis_state");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (index < 0 || index >= dim) {
    throw std::invalid_argument("DensityMatrix::basis_state: index out of range");
  }
  Matrix rho = Matrix::Zero(dim, dim);
  rho(index, index) = 1.0;
  return DensityMatrix(num_qubits, std::move(rho));
}

DensityMatrix DensityMatrix::from_pure(int num_qubits, const Vector& amplitudes) {
  check_qubit_count(num_qubits, "DensityMatrix::from_pure");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (amplitudes.size() != dim) {
    throw std::invalid_argument("DensityMatrix::from_pure: amplitude vector has wrong length");
  }
  const double norm = amplitudes.norm();
  if (std::abs(norm - 1.0) > kTraceOneTol) {
    throw std::invalid_argument("DensityMatrix::from_pure: amplitudes are not normalized");
  }
  return DensityMatrix(num_qubits, amplitudes * amplitudes.adjoint());
}

DensityMatrix DensityMatrix::from_matrix(int num_qubits, Matrix rho) {
  check_qubit_count(num_qubits, "DensityMatrix::from_matrix");
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("DensityMatrix::from_matrix: wrong dimension for qubit count");
  }
  if (!is_hermitian(rho)) {
    throw std::invalid_argument("DensityMatrix::from_matrix: state is not hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > kTraceOneTol || std::abs(rho.trace().imag()) > kTraceOneTol) {
    throw std::invalid_argument("DensityMatrix::from_matrix: trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdFloor) {
    throw std::invalid_argument("DensityMatrix::from_matrix: state has a negative eigenvalue");
  }
  return DensityMatrix(num_qubits, std::move(rho));
}

std::vector<double> DensityMatrix::populations() const {
  std::vector<double> out(static_cast<std::size_t>(dim()));
  for (Eigen::Index i = 0; i < dim(); ++i) {
    double p = rho_(i, i).real();
    if (p < kPsdFloor) {
      throw std::runtime_error("DensityMatrix::populations: diagonal entry below -1e-10");
    }
    out[static_cast<std::size_t>(i)] = std::max(p, 0.0);
  }
  return out;
}

// ------------------------------ core operations ------------------------------

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Operator kron(const Operator& a, const Operator& b) {
  Matrix m = kron(a.mat(), b.mat());
  if (a.tag() == OperatorTag::Unitary && b.tag() == OperatorTag::Unitary) {
    return Operator::unitary(std::move(m));
  }
  if (a.tag() == OperatorTag::Hermitian && b.tag() == OperatorTag::Hermitian) {
    return Operator::hermitian(std::move(m));
  }
  return Operator::general(std::move(m));
}

DensityMatrix kron(const DensityMatrix& a, const DensityMatrix& b) {
  return DensityMatrix::from_matrix(a.num_qubits() + b.num_qubits(), kron(a.mat(), b.mat()));
}

Operator matexp_unitary(const Matrix& h, double t) {
  check_square(h, "matexp_unitary");
  if (h.rows() > 64) {
    throw std::invalid_argument("matexp_unitary: dimension above 64");
  }
  if (!is_hermitian(h)) {
    throw std::invalid_argument("matexp_unitary: generator is not hermitian");
  }
  if (!std::isfinite(t)) {
    throw std::invalid_argument("matexp_unitary: time is not finite");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  Vector phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    phases(i) = std::exp(Complex(0, -es.eigenvalues()(i) * t));
  }
  Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  return Operator::unitary(std::move(u));
}

int scatter_bits(int value, const std::vector<int>& slots, int num_qubits) {
  int out = 0;
  const int m = static_cast<int>(slots.size());
  for (int k = 0; k < m; ++k) {
    const int bit = (value >> (m - 1 - k)) & 1;
    out |= bit << (num_qubits - 1 - slots[k]);
  }
  return out;
}

Operator embed(const Operator& u, const std::vector<int>& targets, int num_qubits) {
  check_qubit_count(num_qubits, "embed");
  check_targets(targets, num_qubits, "embed");
  const int m = static_cast<int>(targets.size());
  if (u.dim() != (Eigen::Index{1} << m)) {
    throw std::invalid_argument("embed: operator dimension does not match target count");
  }
  std::vector<int> rest;
  for (int q = 0; q < num_qubits; ++q) {
    if (std::find(targets.begin(), targets.end(), q) == targets.end()) rest.push_back(q);
  }
  const int dim = 1 << num_qubits;
  const int tdim = 1 << m;
  const int rdim = 1 << static_cast<int>(rest.size());
  Matrix full = Matrix::Zero(dim, dim);
  for (int r = 0; r < rdim; ++r) {
    const int base = scatter_bits(r, rest, num_qubits);
    for (int ti = 0; ti < tdim; ++ti) {
      const int row = base | scatter_bits(ti, targets, num_qubits);
      for (int tj = 0; tj < tdim; ++tj) {
        const int col = base | scatter_bits(tj, targets, num_qubits);
        full(row, col) = u.mat()(ti, tj);
      }
    }
  }
  if (u.tag() == OperatorTag::Unitary) return Operator::unitary(std::move(full));
  if (u.tag() == OperatorTag::Hermitian) return Operator::hermitian(std::move(full));
  return Operator::general(std::move(full));
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Operator& u) {
  if (u.dim() != rho.dim()) {
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  }
  if (u.tag() != OperatorTag::Unitary && !is_unitary(u.mat())) {
    throw std::invalid_argument("apply_unitary: operator is not unitary");
  }
  return DensityMatrix::from_matrix(rho.num_qubits(), u.mat() * rho.mat() * u.mat().adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& discard) {
  const int nq = rho.num_qubits();
  check_targets(discard, nq, "partial_trace");
  if (static_cast<int>(discard.size()) >= nq) {
    throw std::invalid_argument("partial_trace: cannot discard every qubit");
  }
  std::vector<int> keep;
  for (int q = 0; q < nq; ++q) {
    if (std::find(discard.begin(), discard.end(), q) == discard.end()) keep.push_back(q);
  }
  const int kdim = 1 << static_cast<int>(keep.size());
  const int ddim = 1 << static_cast<int>(discard.size());
  Matrix out = Matrix::Zero(kdim, kdim);
  for (int i = 0; i < kdim; ++i) {
    for (int j = 0; j < kdim; ++j) {
      Complex sum = 0;
      for (int d = 0; d < ddim; ++d) {
        const int off = scatter_bits(d, discard, nq);
        sum += rho.mat()(scatter_bits(i, keep, nq) | off, scatter_bits(j, keep, nq) | off);
      }
      out(i, j) = sum;
    }
  }
  return DensityMatrix::from_matrix(static_cast<int>(keep.size()), std::move(out));
}

DensityMatrix reset_qubit(const DensityMatrix& rho, int target, const DensityMatrix& prep) {
  const int nq = rho.num_qubits();
  check_targets({target}, nq, "reset_qubit");
  if (prep.num_qubits() != 1) {
    throw std::invalid_argument("reset_qubit: prep state must be a single qubit");
  }
  if (nq == 1) return prep;
  const DensityMatrix rest = partial_trace(rho, {target});
  std::vector<int> keep;
  for (int q = 0; q < nq; ++q) {
    if (q != target) keep.push_back(q);
  }
  const int kdim = 1 << static_cast<int>(keep.size());
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (int i = 0; i < kdim; ++i) {
    for (int j = 0; j < kdim; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int row = scatter_bits(i, keep, nq) | scatter_bits(a, {target}, nq);
          const int col = scatter_bits(j, keep, nq) | scatter_bits(b, {target}, nq);
          out(row, col) = rest.mat()(i, j) * prep.mat()(a, b);
        }
      }
    }
  }
  return DensityMatrix::from_matrix(nq, std::move(out));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) {
    throw std::invalid_argument("trace_distance: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.mat() - b.mat(), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// ------------------------------ Kraus channels ------------------------------

KrausChannel KrausChannel::from_ops(Eigen::Index dim, std::vector<Matrix> ops) {
  KrausChannel ch;
  ch.dim = dim;
  ch.ops = std::move(ops);
  validate_channel(ch);
  return ch;
}

Matrix choi_matrix(const KrausChannel& channel) {
  const Eigen::Index d = channel.dim;
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (const Matrix& k : channel.ops) {
    Vector v(d * d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        v(i * d + j) = k(i, j);
      }
    }
    choi += v * v.adjoint();
  }
  return choi;
}

void validate_channel(const KrausChannel& channel) {
  if (channel.dim <= 0 || channel.ops.empty()) {
    throw std::invalid_argument("KrausChannel: empty channel");
  }
  Matrix sum = Matrix::Zero(channel.dim, channel.dim);
  for (const Matrix& k : channel.ops) {
    if (k.rows() != channel.dim || k.cols() != channel.dim) {
      throw std::invalid_argument("KrausChannel: operator has wrong dimension");
    }
    sum += k.adjoint() * k;
  }
  if (max_abs(sum - identity(channel.dim)) > kCompletenessTol) {
    throw std::invalid_argument("KrausChannel: operators are not trace preserving");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(choi_matrix(channel), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < kPsdFloor) {
    throw std::invalid_argument("KrausChannel: Choi matrix has a negative eigenvalue");
  }
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& channel) {
  if (channel.dim != rho.dim()) {
    throw std::invalid_argument("apply_channel: dimension mismatch");
  }
  validate_channel(channel);
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const Matrix& k : channel.ops) {
    out += k * rho.mat() * k.adjoint();
  }
  return DensityMatrix::from_matrix(rho.num_qubits(), std::move(out));
}

KrausChannel channel_from_dilation(const Operator& u, const DensityMatrix& bath_state,
                                   int system_qubits) {
  if (u.tag() != OperatorTag::Unitary && !is_unitary(u.mat())) {
    throw std::invalid_argument("channel_from_dilation: dilation is not unitary");
  }
  const int total = qubits_for_dim(u.dim(), "channel_from_dilation");
  if (system_qubits < 1 || system_qubits >= total) {
    throw std::invalid_argument("channel_from_dilation: system qubit count out of range");
  }
  const int bath_qubits = total - system_qubits;
  if (bath_state.num_qubits() != bath_qubits) {
    throw std::invalid_argument("channel_from_dilation: bath state has wrong qubit count");
  }
  const Eigen::Index sdim = Eigen::Index{1} << system_qubits;
  const Eigen::Index bdim = Eigen::Index{1} << bath_qubits;

  Eigen::SelfAdjointEigenSolver<Matrix> es(bath_state.mat());
  std::vector<Matrix> ops;
  for (Eigen::Index j = 0; j < bdim; ++j) {
    const double p = es.eigenvalues()(j);
    if (p < 1e-14) continue;
    const double root = std::sqrt(p);
    for (Eigen::Index i = 0; i < bdim; ++i) {
      Matrix k(sdim, sdim);
      for (Eigen::Index m = 0; m < sdim; ++m) {
        for (Eigen::Index n = 0; n < sdim; ++n) {
          Complex sum = 0;
          for (Eigen::Index beta = 0; beta < bdim; ++beta) {
            sum += u.mat()(m * bdim + i, n * bdim + beta) * es.eigenvectors()(beta, j);
          }
          k(m, n) = root * sum;
        }
      }
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel::from_ops(sdim, std::move(ops));
}

}  // namespace hubsim
