// test_engine.cpp — step kernel, runs, dilated cross-check, sampling, seeds
#include <doctest.h>

#include <cmath>

#include "hubsim/engine.hpp"
#include "test_util.hpp"

using namespace hubsim;

namespace {

ExperimentConfig base_config(Filling filling, int steps) {
  ExperimentConfig c;
  c.model.filling = filling;
  c.model.t12_dt = 0.1;
  if (filling == Filling::OneElectron) {
    c.model.eps_dt = 0.2;
    c.init = InitialState::site2();
  } else {
    c.model.uc_dt = 0.4;
    c.init = InitialState::double_site2();
  }
  c.model.steps = steps;
  c.shots = 0;
  return c;
}

double max_row_gap(const PopulationTrace& a, const PopulationTrace& b) {
  REQUIRE(a.rows.size() == b.rows.size());
  double worst = 0.0;
  for (std::size_t n = 0; n < a.rows.size(); ++n) {
    for (std::size_t k = 0; k < a.rows[n].size(); ++k) {
      worst = std::max(worst, std::abs(a.rows[n][k] - b.rows[n][k]));
    }
  }
  return worst;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("evolve_step composes gates then collisions") {
  ExperimentConfig c = base_config(Filling::TwoElectron, 1);
  c.bath.coupling = BathCoupling::XY;
  c.bath.g_dt = 0.5;

  const DensityMatrix rho0 = c.init.density_matrix(c.model);
  const DensityMatrix stepped = evolve_step(rho0, c.model, c.bath, NoiseModel{});

  const DensityMatrix oracle = apply_channel(
      apply_unitary(rho0, trotter_step_unitary(c.model)), collision_channel(c.bath, 2));
  CHECK(max_abs(stepped.mat() - oracle.mat()) < 1e-13);
}

TEST_CASE("total depolarization after the last gate mixes completely") {
  ExperimentConfig c = base_config(Filling::OneElectron, 1);
  NoiseModel noise;
  noise.depolarizing_1q = 1.0;
  const DensityMatrix out =
      evolve_step(c.init.density_matrix(c.model), c.model, BathSpec{}, noise);
  CHECK(max_abs(out.mat() - 0.5 * identity(2)) < 1e-14);
}

TEST_CASE("amplitude decay follows (1-gamma)^n through the engine") {
  ExperimentConfig c;
  c.model.filling = Filling::OneElectron;
  c.model.steps = 20;
  c.init = InitialState::site2();
  c.shots = 0;
  c.noise.amplitude_decay_per_step = 0.02;
  const PopulationTrace trace = run_experiment(c);
  for (int n = 0; n <= 20; ++n) {
    CHECK(std::abs(trace.rows[static_cast<std::size_t>(n)][1] - std::pow(0.98, n)) < 1e-12);
  }
  CHECK(std::abs(trace.rows[20][1] - 0.6676079717550942) < 1e-12);
}

TEST_CASE("xy collisions through the engine follow the amplitude law") {
  ExperimentConfig c;
  c.model.filling = Filling::OneElectron;
  c.model.steps = 50;
  c.init = InitialState::site2();
  c.shots = 0;
  c.bath.coupling = BathCoupling::XY;
  c.bath.g_dt = 0.5;
  const PopulationTrace trace = run_experiment(c);
  const double survive = std::cos(0.25) * std::cos(0.25);
  for (int n = 0; n <= 50; ++n) {
    CHECK(std::abs(trace.rows[static_cast<std::size_t>(n)][1] - std::pow(survive, n)) < 1e-10);
  }
}

TEST_CASE("epsilon-free run matches the closed form") {
  ExperimentConfig c;
  c.model.filling = Filling::OneElectron;
  c.model.t12_dt = 0.1;
  c.model.steps = 25;
  c.init = InitialState::site2();
  c.shots = 0;
  const PopulationTrace trace = run_experiment(c);
  for (int n = 0; n <= 25; ++n) {
    CHECK(std::abs(trace.rows[static_cast<std::size_t>(n)][0] -
                   std::sin(0.1 * n) * std::sin(0.1 * n)) < 1e-12);
  }
}

TEST_CASE("composed channel equals the explicit dilation") {
  for (int variant = 0; variant < 4; ++variant) {
    ExperimentConfig c = variant < 2 ? base_config(Filling::OneElectron, 20)
                                     : base_config(Filling::TwoElectron, 20);
    c.bath.coupling = variant % 2 == 0 ? BathCoupling::XY : BathCoupling::ZZ;
    c.bath.g_dt = 0.5;
    c.bath.topology = variant == 3 ? BathTopology::Common : BathTopology::PerQubit;
    CAPTURE(variant);
    CHECK(max_row_gap(run_experiment(c), run_experiment_dilated(c)) <= 1e-10);
  }
}

TEST_CASE("dilated path rejects what it cannot model") {
  ExperimentConfig c = base_config(Filling::OneElectron, 3);
  c.noise.depolarizing_1q = 0.01;
  CHECK_THROWS_AS(run_experiment_dilated(c), std::invalid_argument);

  ExperimentConfig c2 = base_config(Filling::OneElectron, 3);
  c2.noise.amplitude_decay_per_step = 0.01;
  CHECK_THROWS_AS(run_experiment_dilated(c2), std::invalid_argument);

  ExperimentConfig c3 = base_config(Filling::OneElectron, 3);
  c3.bitflip_conjugated = true;
  CHECK_THROWS_AS(run_experiment_dilated(c3), std::invalid_argument);
}

TEST_CASE("sampling is deterministic and normalized") {
  ExperimentConfig c = base_config(Filling::TwoElectron, 12);
  c.shots = 4096;
  c.seed = 42;
  const PopulationTrace a = run_experiment(c);
  const PopulationTrace b = run_experiment(c);
  CHECK(a.rows == b.rows);
  CHECK(a.counts == b.counts);
  REQUIRE(a.counts.size() == 13);
  for (const std::vector<long>& counts : a.counts) {
    long total = 0;
    for (long v : counts) {
      CHECK(v >= 0);
      total += v;
    }
    CHECK(total == 4096);
  }
  ExperimentConfig other = c;
  other.seed = 43;
  CHECK(run_experiment(other).rows != a.rows);
}

TEST_CASE("sampled frequencies concentrate around the exact populations") {
  for (long shots : {1024L, 8192L, 65536L}) {
    ExperimentConfig c = base_config(Filling::OneElectron, 25);
    c.bath.coupling = BathCoupling::ZZ;
    c.bath.g_dt = 0.5;
    c.shots = 0;
    const PopulationTrace exact = run_experiment(c);
    c.shots = shots;
    c.seed = 7;
    const PopulationTrace sampled = run_experiment(c);
    CHECK(max_row_gap(exact, sampled) <= 5.0 / std::sqrt(static_cast<double>(shots)));
  }
}

TEST_CASE("a fifty-fifty state splits shots near the middle") {
  ExperimentConfig c;
  c.model.filling = Filling::OneElectron;
  c.model.t12_dt = M_PI / 4.0;  // one step maps |1> to an equal superposition
  c.model.steps = 1;
  c.init = InitialState::site2();
  c.shots = 8192;
  c.seed = 3;
  const PopulationTrace trace = run_experiment(c);
  // 3-sigma window around 4096 at sigma = sqrt(8192)/2.
  CHECK(trace.counts[1][0] > 4096 - 136);
  CHECK(trace.counts[1][0] < 4096 + 136);
}

TEST_CASE("readout flips act at sampling time only") {
  ExperimentConfig c;
  c.model.filling = Filling::OneElectron;
  c.model.steps = 2;
  c.init = InitialState::site2();
  c.noise.readout_flip = {{0.0, 0.1}};
  c.shots = 0;
  const PopulationTrace exact = run_experiment(c);
  CHECK(exact.rows[2][1] == doctest::Approx(1.0));  // exact rows never see readout error

  c.shots = 8192;
  c.seed = 5;
  const PopulationTrace sampled = run_experiment(c);
  CHECK(sampled.rows[2][0] == doctest::Approx(0.1).epsilon(0.2));
}

TEST_CASE("bitflip conjugation is invisible without noise") {
  ExperimentConfig c = base_config(Filling::TwoElectron, 15);
  c.bath.coupling = BathCoupling::ZZ;
  c.bath.g_dt = 0.5;
  const PopulationTrace standard = run_experiment(c);
  ExperimentConfig flipped = c;
  flipped.bitflip_conjugated = true;
  CHECK(max_row_gap(standard, run_experiment(flipped)) < 1e-12);
}

TEST_CASE("bitflip conjugation reweights asymmetric noise") {
  ExperimentConfig c = base_config(Filling::TwoElectron, 10);
  c.noise.amplitude_decay_per_step = 0.05;
  const PopulationTrace standard = run_experiment(c);
  ExperimentConfig flipped = c;
  flipped.bitflip_conjugated = true;
  // Decay pushes toward |00>; in the flipped frame the same decay pushes the
  // logical state the other way, so the traces must differ.
  CHECK(max_row_gap(standard, run_experiment(flipped)) > 1e-3);
}

TEST_CASE("sample_counts keys by bitstring") {
  const auto counts = sample_counts(DensityMatrix::basis_state(2, 2), 64, 9, {});
  CHECK(counts.at("10") == 64);
  CHECK(counts.at("00") == 0);
  CHECK_THROWS_AS(sample_counts(DensityMatrix::basis_state(1, 0), 0, 1, {}),
                  std::invalid_argument);
}

TEST_CASE("per-step seed streams are stable and distinct") {
  CHECK(mix_seed(0, 1) == mix_seed(0, 1));
  CHECK(mix_seed(0, 1) != mix_seed(0, 2));
  CHECK(mix_seed(0, 1) != mix_seed(1, 1));
  CHECK(mix_seed(0, 0) != 0);
}

TEST_CASE("every step preserves the trace with all noise active") {
  ExperimentConfig c = base_config(Filling::TwoElectron, 30);
  c.bath.coupling = BathCoupling::XY;
  c.bath.topology = BathTopology::PerQubit;
  c.bath.g_dt = 0.5;
  c.noise.depolarizing_1q = 0.01;
  c.noise.depolarizing_2q = 0.02;
  c.noise.amplitude_decay_per_step = 0.03;
  const PopulationTrace trace = run_experiment(c);
  for (const std::vector<double>& row : trace.rows) {
    double sum = 0.0;
    for (double v : row) sum += v;
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

// Dephasing shrinks the transverse Bloch components by cos(g) per collision,
// but the driven qubit's polarization spends only half its time in the
// transverse plane: the slow eigenvalue of the composed step map is the
// geometric mean sqrt(cos g).  The distance to I/2 obeys that envelope, drops
// below 0.01 within 12/(-ln cos g) steps, and never comes back out.  The
// populations alone equilibrate much sooner — |P_i - 1/2| is |z|/2, and the
// Rabi rotation sweeps z through zero every half period — so their first
// passage below 0.01 lands well inside 6/(-ln cos g) steps.
TEST_CASE("repeated ZZ collisions drive the driven qubit to I/2") {
  ExperimentConfig c = base_config(Filling::OneElectron, 1);
  c.model.eps_dt = 0.0;
  c.bath.coupling = BathCoupling::ZZ;
  c.bath.g_dt = 0.5;
  const double envelope = std::sqrt(std::cos(0.5));
  const int bound = static_cast<int>(std::ceil(12.0 / -std::log(std::cos(0.5))));  // 92
  const int pop_bound = static_cast<int>(std::ceil(6.0 / -std::log(std::cos(0.5))));  // 46
  const DensityMatrix mixed = DensityMatrix::from_matrix(1, 0.5 * identity(2));

  DensityMatrix rho = c.init.density_matrix(c.model);
  bool reached = false;
  int pop_first_passage = bound + 31;
  double worst_after = 0.0;
  for (int n = 1; n <= bound + 30; ++n) {
    rho = evolve_step(rho, c.model, c.bath, NoiseModel{});
    const double dist = trace_distance(rho, mixed);
    CHECK(dist <= std::pow(envelope, n));
    if (n <= bound && dist <= 0.01) reached = true;
    if (n >= bound) worst_after = std::max(worst_after, dist);
    const std::vector<double> pops = rho.populations();
    const double pop_gap = std::max(std::abs(pops[0] - 0.5), std::abs(pops[1] - 0.5));
    if (pop_gap <= 0.01 && pop_first_passage > n) pop_first_passage = n;
  }
  CHECK(reached);
  CHECK(worst_after <= 0.01);
  CHECK(pop_first_passage <= pop_bound);
}

// Per-qubit XY damping competes with hopping and interaction; the composed
// step map still has a unique fixed point, found here by power iteration.
TEST_CASE("damped two-electron map settles onto its fixed point") {
  ExperimentConfig c = base_config(Filling::TwoElectron, 64);
  c.bath.coupling = BathCoupling::XY;
  c.bath.topology = BathTopology::PerQubit;
  c.bath.g_dt = 0.5;

  DensityMatrix fixed = c.init.density_matrix(c.model);
  for (int n = 0; n < 4000; ++n) {
    const DensityMatrix next = evolve_step(fixed, c.model, c.bath, NoiseModel{});
    if (trace_distance(next, fixed) < 1e-14 && n > 100) {
      fixed = next;
      break;
    }
    fixed = next;
  }
  const DensityMatrix moved = evolve_step(fixed, c.model, c.bath, NoiseModel{});
  CHECK(trace_distance(moved, fixed) <= 1e-12);

  // The transient rings down through ~0.057 at n=45; from n=50 on every
  // population sits within 0.02 of the stationary point.
  const std::vector<double> stationary = fixed.populations();
  const PopulationTrace trace = run_experiment(c);
  for (std::size_t n = 50; n < trace.rows.size(); ++n) {
    for (std::size_t k = 0; k < stationary.size(); ++k) {
      CHECK(std::abs(trace.rows[n][k] - stationary[k]) <= 0.02);
    }
  }
}

TEST_CASE("config validation") {
  ExperimentConfig c = base_config(Filling::OneElectron, 3);
  c.shots = -1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);

  ExperimentConfig c2 = base_config(Filling::OneElectron, 3);
  c2.shots = 0;
  c2.mitigation.readout = true;
  CHECK_THROWS_AS(c2.validate(), std::invalid_argument);
  c2.mitigation.readout = false;
  c2.mitigation.zne = ZneSpec{};
  CHECK_NOTHROW(c2.validate());  // extrapolation works on exact traces too

  ExperimentConfig c3 = base_config(Filling::OneElectron, 3);
  c3.mitigation.zne = ZneSpec{2, {1, 2}};  // needs order+1 scales
  CHECK_THROWS_AS(c3.validate(), std::invalid_argument);
  c3.mitigation.zne = ZneSpec{1, {2, 2}};
  CHECK_THROWS_AS(c3.validate(), std::invalid_argument);
  c3.mitigation.zne = ZneSpec{1, {0, 1}};
  CHECK_THROWS_AS(c3.validate(), std::invalid_argument);

  ExperimentConfig c4 = base_config(Filling::OneElectron, 3);
  c4.noise.readout_flip = {{0.1, 0.1}, {0.1, 0.1}};  // two entries, one qubit
  CHECK_THROWS_AS(c4.validate(), std::invalid_argument);
}

}  // TEST_SUITE
