#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rydlgt/dynamics.hpp"
#include "rydlgt/error.hpp"
#include "rydlgt/lgt.hpp"
#include "rydlgt/scan.hpp"
#include "test_util.hpp"

using namespace rydlgt;
using rydlgt::testing::make_geometry;

namespace {

constexpr double kOmega = units::kOmegaMax;

RydbergOperator make_operator(const std::shared_ptr<const Geometry>& g, BasisMode mode, double rb) {
  return RydbergOperator(BasisSpace::enumerate(g, mode), interaction_graph(*g, kOmega * std::pow(rb, 6)));
}

}  // namespace

TEST(Lanczos, SingleAtomAnalytic) {
  const RydbergOperator op = make_operator(make_geometry(1, 1), BasisMode::Full, 1.2);
  const double omega = 1.3, delta = 0.7;
  const GroundState gs = ground_state(op, DriveSample{omega, delta, 0.0, 0.0});
  EXPECT_NEAR(gs.energy, -delta / 2 - std::sqrt(delta * delta + omega * omega) / 2, 1e-12);
}

TEST(Lanczos, MatchesDenseDiagonalization) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& g : rydlgt::testing::small_geometries()) {
    for (BasisMode mode : {BasisMode::Full, BasisMode::Blockaded}) {
      const RydbergOperator op = make_operator(g, mode, 1.0 + u(rng));
      if (op.dim() > 1024) continue;
      const DriveSample s{kOmega, kOmega * (4.0 * u(rng) - 1.0), 0.0, 0.0};
      const GroundState gs = ground_state(op, s);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(op.dense(s, 1U << 16));
      EXPECT_NEAR(gs.energy, eig.eigenvalues()[0], 1e-9);
      EXPECT_LT(gs.residual, 1e-8);
      EXPECT_TRUE(gs.state.is_normalized(1e-10));
    }
  }
}

TEST(Lanczos, DeterministicForSeed) {
  const RydbergOperator op = make_operator(make_geometry(3, 3), BasisMode::Blockaded, 1.2);
  const DriveSample s{kOmega, 2.3 * kOmega, 0.0, 0.0};
  LanczosOptions o;
  o.seed = 17;
  const GroundState a = ground_state(op, s, o);
  const GroundState b = ground_state(op, s, o);
  for (std::size_t k = 0; k < op.dim(); ++k) ASSERT_EQ(a.state[k], b.state[k]);
}

TEST(Lanczos, NonConvergenceReportsResidual) {
  const RydbergOperator op = make_operator(make_geometry(3, 3), BasisMode::Blockaded, 1.2);
  LanczosOptions o;
  o.krylov_dim = 3;
  o.max_restarts = 1;
  try {
    (void)ground_state(op, DriveSample{kOmega, 2.3 * kOmega, 0.0, 0.0}, o);
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_GT(e.residual(), 1e-8);
  }
}

TEST(Lanczos, DeepDetuningFavoursVacuum) {
  const auto g = make_geometry(3, 2);
  const RydbergOperator op = make_operator(g, BasisMode::Full, 1.5);
  const GroundState gs = ground_state(op, DriveSample{kOmega, 4.0 * kOmega, 0.0, 0.0});
  std::size_t best = 0;
  for (std::size_t k = 0; k < op.dim(); ++k) {
    if (std::norm(gs.state[k]) > std::norm(gs.state[best])) best = k;
  }
  EXPECT_EQ(op.basis().state(best), vacuum_bitstring(*g));
}

TEST(Evolve, ZeroTimeLeavesStateUnchanged) {
  std::mt19937_64 rng(1);
  const RydbergOperator op = make_operator(make_geometry(2, 2), BasisMode::Blockaded, 1.2);
  const QuantumState psi = rydlgt::testing::random_state(op.basis_ptr(), rng);
  const double times[] = {0.0};
  const auto traj = quench(psi, op, DriveSample{kOmega, 1.0, 0.0, 0.0}, {}, times);
  for (std::size_t k = 0; k < psi.size(); ++k) EXPECT_EQ(traj.final_state[k], psi[k]);
}

TEST(Evolve, RabiOscillation) {
  const RydbergOperator op = make_operator(make_geometry(1, 1), BasisMode::Full, 1.2);
  const QuantumState g = QuantumState::basis_state(op.basis_ptr(), 0);
  std::vector<double> times;
  for (int k = 1; k <= 20; ++k) times.push_back(0.05 * k);
  const auto traj = quench(g, op, DriveSample{kOmega, 0.0, 0.0, 0.0}, {}, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expected = std::pow(std::sin(kOmega * times[k] / 2), 2);
    EXPECT_NEAR(std::norm(traj.states[k][1]), expected, 1e-10);
  }
}

TEST(Evolve, MatchesDenseOracleWithTimeDependentDrive) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto g = make_geometry(2, 2);
  const RydbergOperator op = make_operator(g, BasisMode::Full, 1.3);
  DriveSchedule s;
  s.t_end = 1.0;
  s.omega = Waveform({{0.0, 0.0}, {0.3, kOmega}, {1.0, kOmega * 0.8}});
  s.delta = Waveform({{0.0, -kOmega}, {0.6, kOmega * (1.5 + u(rng))}, {1.0, kOmega * 2.0}});
  s.phi = Waveform({{0.0, 0.0}, {1.0, 0.4}});
  s.delta_local = Waveform({{0.0, 0.0}, {1.0, kOmega * 0.5}});
  s.pattern.assign(g->size(), 0.0);
  s.pattern[2] = 1.0;
  s.pattern[5] = 0.3;
  const QuantumState psi0 = rydlgt::testing::random_state(op.basis_ptr(), rng);
  EvolveOptions o;
  o.dt = 0.02;
  const double end[] = {1.0};
  const auto traj = evolve(psi0, op, s, end, o);

  const RydbergOperator h = op.with_pattern(s.pattern);
  Eigen::VectorXcd ref = rydlgt::testing::to_eigen(psi0);
  for (int k = 0; k < 50; ++k) {
    const double mid = 0.02 * k + 0.01;
    ref = rydlgt::testing::dense_propagator(h.dense(s.at(mid), 1U << 12), 0.02) * ref;
  }
  const cplx overlap = rydlgt::testing::to_eigen(traj.final_state).dot(ref);
  EXPECT_GT(std::norm(overlap), 1.0 - 1e-10);
  EXPECT_LT(traj.max_norm_drift, 1e-10);
  EXPECT_EQ(traj.renormalizations, 0U);
}

TEST(Evolve, ConservesEnergyUnderConstantDrive) {
  std::mt19937_64 rng(4);
  const RydbergOperator op = make_operator(make_geometry(3, 3), BasisMode::Blockaded, 1.2);
  const DriveSample s{kOmega, 2.3 * kOmega, 0.0, 0.0};
  const QuantumState psi = rydlgt::testing::random_state(op.basis_ptr(), rng);
  const auto energy = [&](const QuantumState& x) { return inner(x.amplitudes(), op.apply(s, x).amplitudes()).real(); };
  const double times[] = {0.5};
  const auto traj = quench(psi, op, s, {}, times);
  EXPECT_NEAR(energy(traj.final_state), energy(psi), 1e-8 * std::max(1.0, std::abs(energy(psi))));
  EXPECT_LT(traj.max_norm_drift, 1e-10);
}

TEST(Evolve, RejectsBadSampleTimes) {
  const RydbergOperator op = make_operator(make_geometry(2, 2), BasisMode::Blockaded, 1.2);
  const QuantumState psi = QuantumState::basis_state(op.basis_ptr(), 0);
  const DriveSchedule s = constant_schedule(DriveSample{kOmega, 0.0, 0.0, 0.0}, {}, 1.0);
  const double unsorted[] = {0.5, 0.2};
  const double beyond[] = {1.5};
  EXPECT_THROW(evolve(psi, op, s, unsorted), ConfigError);
  EXPECT_THROW(evolve(psi, op, s, beyond), ConfigError);
  EXPECT_THROW(quench(psi, op, DriveSample{}, {}, std::span<const double>{}), ConfigError);
}

TEST(Protocols, AdiabaticityMetric) {
  const auto metric = [](double final_ratio, SweepTiming t) {
    return adiabaticity_metric(sweep_schedule(1, kOmega, final_ratio * kOmega, t));
  };
  EXPECT_NEAR(metric(2.3, SweepTiming::quench_preparation()), 1.28, 0.005);
  EXPECT_NEAR(metric(3.67, SweepTiming{}), 0.99, 0.005);
  EXPECT_NEAR(metric(1.0, SweepTiming{}), 0.56, 0.005);
  EXPECT_NEAR(metric(5.0, SweepTiming{}), 1.20, 0.005);
  EXPECT_EQ(adiabaticity_metric(constant_schedule(DriveSample{kOmega, 1.0, 0.0, 0.0}, {}, 1.0)), 0.0);
}

TEST(Protocols, SweepTimingDefaults) {
  const DriveSchedule s = sweep_schedule(3, kOmega, 2.0 * kOmega);
  EXPECT_DOUBLE_EQ(s.t_end, 3.0);
  EXPECT_DOUBLE_EQ(s.at(0.0).delta, -2.5 * kOmega);
  EXPECT_NEAR(units::to_mhz(s.at(0.0).delta), -6.25, 1e-12);
  EXPECT_DOUBLE_EQ(s.at(1.0).omega, kOmega);
  EXPECT_DOUBLE_EQ(s.at(2.75).delta, 2.0 * kOmega);
  EXPECT_DOUBLE_EQ(s.at(3.0).omega, 0.0);
  const DriveSchedule q = sweep_schedule(3, kOmega, 2.0 * kOmega, SweepTiming::quench_preparation());
  EXPECT_DOUBLE_EQ(q.t_end, 1.75);
  EXPECT_DOUBLE_EQ(q.at(1.75).omega, kOmega);
}

TEST(Protocols, AssistedScheduleHoldsPatternedAtoms) {
  const DriveSchedule s = assisted_schedule({1.0, 0.0}, kOmega, 2.0 * kOmega);
  for (double t = 0.0; t <= s.t_end; t += 0.05) {
    const DriveSample x = s.at(t);
    EXPECT_NEAR(x.delta - x.delta_local, -2.5 * kOmega, 1e-9);
  }
}

TEST(Protocols, DeepNegativeSweepStaysInGround) {
  const RydbergOperator op = make_operator(make_geometry(2, 2), BasisMode::Blockaded, 1.2);
  SweepTiming t;
  t.delta_start_over_omega = -12.0;
  const QuantumState psi = sweep_prepare(op, kOmega, -10.0 * kOmega, t);
  EXPECT_GT(psi.probability(0), 0.99);
}

TEST(Protocols, AssistedVacuumPreparation) {
  const auto g = make_geometry(2, 2);
  const RydbergOperator op = make_operator(g, BasisMode::Blockaded, 1.2);
  const AssistedResult r = assisted_prepare(op, vacuum_bitstring(*g), kOmega, 2.3 * kOmega);
  EXPECT_GT(r.fidelity, 0.9);
  EXPECT_THROW(assisted_prepare(op, 0b11, kOmega, 2.3 * kOmega), ConfigError);
}

TEST(Protocols, BrokenStringPatternIsQuenchPattern) {
  const auto g = rydlgt::testing::reduced_d2();
  const StringSet set = enumerate_strings(*g);
  const Bitstring b = set.get("broken_b").bits;
  const auto pattern = ground_atom_pattern(b, g->size());
  for (std::size_t k = 0; k < g->size(); ++k) {
    const bool inter = g->atoms()[k].kind != LinkKind::Intra;
    EXPECT_EQ(pattern[k], inter ? 1.0 : 0.0);
  }
}

TEST(Protocols, QuenchWithoutLocalDetuningIsPlainEvolution) {
  std::mt19937_64 rng(6);
  const auto g = make_geometry(3, 2);
  const RydbergOperator op = make_operator(g, BasisMode::Blockaded, 1.2);
  const QuantumState psi = rydlgt::testing::random_state(op.basis_ptr(), rng);
  const double times[] = {0.3};
  const DriveSample drive{kOmega, 2.3 * kOmega, 0.0, 0.0};
  const auto a = quench(psi, op, drive, std::vector<double>(g->size(), 1.0), times);
  const auto b = evolve(psi, op, constant_schedule(drive, {}, 0.3), times);
  for (std::size_t k = 0; k < psi.size(); ++k) EXPECT_NEAR(std::abs(a.final_state[k] - b.final_state[k]), 0.0, 1e-12);
}

TEST(Protocols, FrozenPopulationsWithoutDrive) {
  std::mt19937_64 rng(10);
  const RydbergOperator op = make_operator(make_geometry(3, 2), BasisMode::Blockaded, 1.2);
  const QuantumState psi = rydlgt::testing::random_state(op.basis_ptr(), rng);
  const double times[] = {0.4, 1.6};
  const auto traj = quench(psi, op, DriveSample{0.0, 2.0, 0.0, 1.0}, std::vector<double>(op.basis().atom_count(), 1.0), times);
  for (const auto& s : traj.states) {
    for (std::size_t k = 0; k < psi.size(); ++k) EXPECT_NEAR(std::norm(s[k]), std::norm(psi[k]), 1e-12);
  }
}

TEST(Protocols, ResonantQuenchTransfersStringToBroken) {
  const auto g = make_geometry(5, 3, {rydlgt::testing::A(1, 1), rydlgt::testing::B(3, 1)},
                               {{0, 0}, {4, 2}, {0, 2}, {4, 0}});
  const RydbergOperator op = make_operator(g, BasisMode::Blockaded, 1.2);
  const StringSet set = enumerate_strings(*g);
  const FilterRegion region = aggressive_filter(set);
  const QuantumState psi0 = ground_state(op, DriveSample{kOmega, 2.3 * kOmega, 0.0, 0.0}).state;
  const auto pattern = ground_atom_pattern(set.get("broken_b").bits, g->size());
  std::vector<double> times{0.0, 0.05, 0.1, 0.15, 0.2};
  const auto traj = quench(psi0, op, DriveSample{kOmega, 2.3 * kOmega, 0.0, 1.0 * kOmega}, pattern, times);
  // The string weight also leaks into locally fluctuating configurations, so
  // only the broken weight is monotone on this short window.
  double first_s = 0.0, last_s = 0.0, last_b = -1.0;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto rows = string_probabilities(traj.states[k], set, region);
    const double pb = probability_of(rows, "broken_b");
    last_s = probability_of(rows, "p_s");
    if (k == 0) first_s = last_s;
    EXPECT_GT(pb, last_b);
    last_b = pb;
  }
  EXPECT_LT(last_s, first_s);
  EXPECT_GT(last_b, 0.05);
}
