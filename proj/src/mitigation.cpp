// mitigation.cpp — confusion matrices, simplex projection, ZNE, bitflip frames
#include "hubsim/mitigation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <stdexcept>

namespace hubsim {

namespace {

constexpr double kColumnSumTol = 1e-9;
constexpr std::uint64_t kZneSeedStream = 0x5ca1e000ull;
constexpr std::uint64_t kBitflipSeedStream = 0xf11bull;

}  // namespace

ConfusionMatrix ConfusionMatrix::from_matrix(Eigen::MatrixXd m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw std::invalid_argument("ConfusionMatrix: matrix must be square and nonempty");
  }
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double v = m(i, j);
      if (!std::isfinite(v) || v < -kColumnSumTol || v > 1.0 + kColumnSumTol) {
        throw std::invalid_argument("ConfusionMatrix: entries must lie in [0, 1]");
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kColumnSumTol) {
      throw std::invalid_argument("ConfusionMatrix: columns must sum to 1");
    }
  }
  return ConfusionMatrix(std::move(m));
}

ConfusionMatrix build_confusion_matrix(const std::vector<std::pair<double, double>>& readout,
                                       int num_qubits, long shots, std::uint64_t seed) {
  if (num_qubits < 1 || num_qubits > kMaxQubits) {
    throw std::invalid_argument("build_confusion_matrix: bad qubit count");
  }
  std::vector<std::pair<double, double>> table = readout;
  if (table.empty()) {
    table.assign(static_cast<std::size_t>(num_qubits), {0.0, 0.0});
  } else if (table.size() == 1) {
    table.assign(static_cast<std::size_t>(num_qubits), readout.front());
  } else if (static_cast<int>(table.size()) != num_qubits) {
    throw std::invalid_argument("build_confusion_matrix: readout table size mismatch");
  }
  for (const auto& [p01, p10] : table) {
    if (!std::isfinite(p01) || p01 < 0.0 || p01 > 1.0 || !std::isfinite(p10) || p10 < 0.0 ||
        p10 > 1.0) {
      throw std::invalid_argument("build_confusion_matrix: flip probabilities must lie in [0, 1]");
    }
  }
  const int dim = 1 << num_qubits;
  if (shots <= 0) {
    throw std::invalid_argument("build_confusion_matrix: calibration needs shots > 0");
  }

  // Calibration runs: prepare each basis state and tally flipped readouts.
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(j)));
    for (long s = 0; s < shots; ++s) {
      int outcome = j;
      for (int q = 0; q < num_qubits; ++q) {
        const int bit = bit_at(j, q, num_qubits);
        const double flip = bit == 0 ? table[static_cast<std::size_t>(q)].first
                                     : table[static_cast<std::size_t>(q)].second;
        if (flip > 0.0 && rng.uniform() < flip) {
          outcome ^= 1 << (num_qubits - 1 - q);
        }
      }
      m(outcome, j) += 1.0;
    }
  }
  m /= static_cast<double>(shots);
  return ConfusionMatrix::from_matrix(std::move(m));
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
  if (v.empty()) {
    throw std::invalid_argument("project_to_simplex: empty vector");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw std::invalid_argument("project_to_simplex: entries must be finite");
    }
  }
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, cum_at_rho = 0.0;
  int rho = 0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cum += u[j];
    if (u[j] + (1.0 - cum) / static_cast<double>(j + 1) > 0.0) {
      rho = static_cast<int>(j + 1);
      cum_at_rho = cum;
    }
  }
  const double theta = (cum_at_rho - 1.0) / static_cast<double>(rho);
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = std::max(v[i] - theta, 0.0);
  }
  return out;
}

std::vector<double> correct_readout(const std::vector<double>& measured,
                                    const ConfusionMatrix& cm, bool raw_inverse) {
  const Eigen::Index dim = cm.dim();
  if (static_cast<Eigen::Index>(measured.size()) != dim) {
    throw std::invalid_argument("correct_readout: distribution size does not match the matrix");
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cm.mat());
  if (qr.rank() < dim) {
    throw std::runtime_error("correct_readout: confusion matrix is singular");
  }
  Eigen::VectorXd b(dim);
  for (Eigen::Index i = 0; i < dim; ++i) b(i) = measured[static_cast<std::size_t>(i)];
  const Eigen::VectorXd x = qr.solve(b);
  std::vector<double> out(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) out[static_cast<std::size_t>(i)] = x(i);
  return raw_inverse ? out : project_to_simplex(out);
}

PopulationTrace correct_trace(const PopulationTrace& trace, const ConfusionMatrix& cm,
                              bool raw_inverse) {
  PopulationTrace out;
  out.labels = trace.labels;
  out.shots = trace.shots;
  out.rows.reserve(trace.rows.size());
  for (const std::vector<double>& row : trace.rows) {
    out.rows.push_back(correct_readout(row, cm, raw_inverse));
  }
  return out;
}

double zne_richardson(std::vector<std::pair<double, double>> points, int order) {
  if (order < 0) {
    throw std::invalid_argument("zne_richardson: order must be nonnegative");
  }
  if (static_cast<int>(points.size()) < order + 1) {
    throw std::invalid_argument("zne_richardson: need at least order+1 points");
  }
  std::sort(points.begin(), points.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  points.resize(static_cast<std::size_t>(order + 1));
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i].first == points[i + 1].first) {
      throw std::invalid_argument("zne_richardson: duplicate scales");
    }
  }
  double value = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double weight = 1.0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      weight *= -points[j].first / (points[i].first - points[j].first);
    }
    value += weight * points[i].second;
  }
  return value;
}

ExperimentConfig noise_scaled_config(const ExperimentConfig& config, int scale) {
  if (scale < 1) {
    throw std::invalid_argument("noise_scaled_config: scale must be a positive integer");
  }
  ExperimentConfig scaled = config;
  scaled.model.steps = config.model.steps * scale;
  scaled.model.eps_dt = config.model.eps_dt / scale;
  scaled.model.t12_dt = config.model.t12_dt / scale;
  scaled.model.uc_dt = config.model.uc_dt / scale;
  scaled.bath.g_dt = config.bath.g_dt / scale;
  scaled.model.validate();
  scaled.bath.validate();
  return scaled;
}

PopulationTrace zne_trace(const ExperimentConfig& config, bool parallel) {
  config.validate();
  if (!config.mitigation.zne) {
    throw std::invalid_argument("zne_trace: config has no zne spec");
  }
  const ZneSpec& zne = *config.mitigation.zne;
  const std::launch launch = parallel ? std::launch::async : std::launch::deferred;
  std::vector<std::future<PopulationTrace>> runs;
  runs.reserve(zne.scales.size());
  for (int scale : zne.scales) {
    ExperimentConfig scaled = noise_scaled_config(config, scale);
    scaled.mitigation = MitigationSpec{};
    scaled.seed = mix_seed(config.seed, kZneSeedStream + static_cast<std::uint64_t>(scale));
    runs.push_back(std::async(launch, [scaled] { return run_experiment(scaled); }));
  }
  std::vector<PopulationTrace> traces;
  traces.reserve(runs.size());
  for (std::future<PopulationTrace>& run : runs) {
    traces.push_back(run.get());
  }

  PopulationTrace out;
  out.labels = traces.front().labels;
  out.shots = config.shots;
  const std::size_t width = out.labels.size();
  for (int n = 0; n <= config.model.steps; ++n) {
    std::vector<double> row(width);
    for (std::size_t k = 0; k < width; ++k) {
      std::vector<std::pair<double, double>> points;
      points.reserve(zne.scales.size());
      for (std::size_t s = 0; s < zne.scales.size(); ++s) {
        const std::size_t matched = static_cast<std::size_t>(zne.scales[s]) *
                                    static_cast<std::size_t>(n);
        points.emplace_back(static_cast<double>(zne.scales[s]), traces[s].rows[matched][k]);
      }
      row[k] = zne_richardson(std::move(points), zne.order);
    }
    out.rows.push_back(project_to_simplex(row));
  }
  return out;
}

BitflipRelabel bitflip_relabel(const ExperimentConfig& config) {
  BitflipRelabel out;
  out.config = config;
  out.config.bitflip_conjugated = !config.bitflip_conjugated;
  const int dim = 1 << config.model.num_qubits();
  out.outcome_map.resize(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    out.outcome_map[static_cast<std::size_t>(i)] = ~i & (dim - 1);
  }
  return out;
}

PopulationTrace average_traces(const PopulationTrace& a, const PopulationTrace& b) {
  if (a.labels != b.labels || a.rows.size() != b.rows.size()) {
    throw std::invalid_argument("average_traces: traces are not aligned");
  }
  PopulationTrace out;
  out.labels = a.labels;
  out.shots = a.shots + b.shots;
  out.rows.reserve(a.rows.size());
  for (std::size_t n = 0; n < a.rows.size(); ++n) {
    if (a.rows[n].size() != b.rows[n].size()) {
      throw std::invalid_argument("average_traces: rows are not aligned");
    }
    std::vector<double> row(a.rows[n].size());
    for (std::size_t k = 0; k < row.size(); ++k) {
      row[k] = 0.5 * (a.rows[n][k] + b.rows[n][k]);
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

PopulationTrace bitflip_trace(const ExperimentConfig& config, bool parallel) {
  config.validate();
  ExperimentConfig standard = config;
  standard.mitigation = MitigationSpec{};
  ExperimentConfig conjugated = bitflip_relabel(standard).config;
  conjugated.seed = mix_seed(config.seed, kBitflipSeedStream);
  const std::launch launch = parallel ? std::launch::async : std::launch::deferred;
  std::future<PopulationTrace> first =
      std::async(launch, [standard] { return run_experiment(standard); });
  std::future<PopulationTrace> second =
      std::async(launch, [conjugated] { return run_experiment(conjugated); });
  return average_traces(first.get(), second.get());
}

}  // namespace hubsim
