// trace.hpp — population-vs-step-count results shared by the model and engine
#pragma once

#include <string>
#include <vector>

namespace hubsim {

// One row per step count n = 0..steps. In exact mode rows hold channel
// probabilities and `counts` stays empty; in sampled mode rows hold
// counts/shots and `counts` holds the integer draws.
struct PopulationTrace {
  std::vector<std::string> labels;          // "p_0", "p_1" or "p_00".."p_11"
  std::vector<std::vector<double>> rows;
  long shots = 0;                           // 0 means exact
  std::vector<std::vector<long>> counts;

  int num_steps() const { return static_cast<int>(rows.size()) - 1; }
};

// Column labels for an n-qubit register, e.g. {"p_00", "p_01", "p_10", "p_11"}.
std::vector<std::string> basis_labels(int num_qubits);

}  // namespace hubsim
