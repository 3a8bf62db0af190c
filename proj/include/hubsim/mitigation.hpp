// mitigation.hpp — readout unfolding, zero-noise extrapolation, bitflip averaging
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hubsim/engine.hpp"
#include "hubsim/trace.hpp"

namespace hubsim {

// Column-stochastic response matrix: column j is the outcome distribution
// observed when the register is prepared in basis state |j>.
class ConfusionMatrix {
 public:
  static ConfusionMatrix from_matrix(Eigen::MatrixXd m);

  const Eigen::MatrixXd& mat() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  explicit ConfusionMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {}
  Eigen::MatrixXd m_;
};

// Calibration: column j is estimated from `shots` draws of basis state |j>
// pushed through the per-qubit flip probabilities, each column on its own
// seed stream so columns can be calibrated independently. shots must be > 0.
ConfusionMatrix build_confusion_matrix(const std::vector<std::pair<double, double>>& readout,
                                       int num_qubits, long shots, std::uint64_t seed);

// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(const std::vector<double>& v);

// Least-squares unfolding of one measured distribution through the confusion
// matrix; the result is projected back onto the simplex unless raw_inverse.
std::vector<double> correct_readout(const std::vector<double>& measured,
                                    const ConfusionMatrix& cm, bool raw_inverse = false);

// Row-wise correct_readout over a whole trace.
PopulationTrace correct_trace(const PopulationTrace& trace, const ConfusionMatrix& cm,
                              bool raw_inverse = false);

// Richardson extrapolation to scale 0: Lagrange interpolation through the
// order+1 lowest-scale points. Duplicate scales among those points throw.
double zne_richardson(std::vector<std::pair<double, double>> points, int order);

// The same continuous dynamics split over `scale` times as many Trotter
// steps: steps multiply by scale, every per-step angle divides by it, so the
// ideal trace is unchanged at matching times while per-step noise stacks up.
ExperimentConfig noise_scaled_config(const ExperimentConfig& config, int scale);

// Runs every configured scale, extrapolates each population at matching
// physical times (row s*n of the scale-s run), and projects each
// extrapolated row back onto the simplex. The scaled runs are independent;
// `parallel` executes them concurrently without changing any output.
PopulationTrace zne_trace(const ExperimentConfig& config, bool parallel = false);

// The experiment in the globally bit-flipped frame. The engine already
// relabels reported outcomes, so the returned trace estimates the same
// populations; outcome_map records the raw-index complement for reference.
struct BitflipRelabel {
  ExperimentConfig config;
  std::vector<int> outcome_map;
};
BitflipRelabel bitflip_relabel(const ExperimentConfig& config);

// Element-wise mean of two traces over the same labels and step count.
PopulationTrace average_traces(const PopulationTrace& a, const PopulationTrace& b);

// Runs the standard and the conjugated frame and averages the two traces,
// symmetrizing noise that is biased toward one basis state. The two frames
// are independent; `parallel` executes them concurrently.
PopulationTrace bitflip_trace(const ExperimentConfig& config, bool parallel = false);

}  // namespace hubsim
