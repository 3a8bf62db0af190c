// trace.cpp — basis label helpers
#include "hubsim/trace.hpp"

#include <stdexcept>

namespace hubsim {

std::vector<std::string> basis_labels(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 8) {
    throw std::invalid_argument("basis_labels: qubit count out of range");
  }
  std::vector<std::string> labels;
  const int dim = 1 << num_qubits;
  labels.reserve(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    std::string bits(static_cast<std::size_t>(num_qubits), '0');
    for (int q = 0; q < num_qubits; ++q) {
      if ((i >> (num_qubits - 1 - q)) & 1) bits[static_cast<std::size_t>(q)] = '1';
    }
    labels.push_back("p_" + bits);
  }
  return labels;
}

}  // namespace hubsim
