#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <set>

#include "rydlgt/dynamics.hpp"
#include "rydlgt/error.hpp"
#include "rydlgt/hamiltonian.hpp"
#include "rydlgt/lgt.hpp"
#include "test_util.hpp"

using namespace rydlgt;
using rydlgt::testing::A;
using rydlgt::testing::B;
using rydlgt::testing::make_geometry;

namespace {

int nonzero_charges(const GaugeConfig& cfg) {
  int n = 0;
  for (int q : cfg.charge) n += q != 0 ? 1 : 0;
  return n;
}

int charge_at(const GaugeConfig& cfg, const Geometry& g, Site s) { return cfg.charge[*g.vertex_index(s)]; }

// Vertices touched by atom k, found from the vertex-atom incidence alone.
std::set<int> endpoints(const Geometry& g, int k) {
  std::set<int> out;
  for (std::size_t v = 0; v < g.vertices().size(); ++v) {
    for (int a : g.vertex_atoms(static_cast<int>(v))) {
      if (a == k) out.insert(static_cast<int>(v));
    }
  }
  return out;
}

}  // namespace

TEST(Encode, VacuumHasUniformFieldAndNoCharge) {
  for (const auto& g : rydlgt::testing::small_geometries()) {
    if (!g->defects().empty()) continue;
    const GaugeConfig cfg = encode(vacuum_bitstring(*g), *g);
    for (double sz : cfg.sz) EXPECT_EQ(sz, -0.5);
    EXPECT_EQ(nonzero_charges(cfg), 0);
    EXPECT_TRUE(cfg.hardcore);
    for (double r : gauss_residual(cfg, *g)) EXPECT_EQ(r, 0.0);
  }
}

TEST(Encode, VacuumIsDimerCovering) {
  const auto g = make_geometry(5, 4);
  ASSERT_EQ(g->size(), 51U);
  const Bitstring v = vacuum_bitstring(*g);
  EXPECT_EQ(std::popcount(v), 20);
  EXPECT_TRUE(satisfies_blockade(v, *g));
  for (int n : vertex_occupancy(v, *g)) EXPECT_EQ(n, 1);
  // A defect-free 5x5 patch has 65 atoms, one more than a bitstring holds.
  EXPECT_THROW(vacuum_bitstring(*make_geometry(5, 5)), CapacityError);
}

TEST(Encode, FlippedDimerCreatesOppositePair) {
  const auto g = make_geometry(3, 3);
  const auto k = g->atom_between(A(1, 1), B(1, 1));
  ASSERT_TRUE(k);
  const GaugeConfig cfg = encode(vacuum_bitstring(*g) & ~(Bitstring{1} << *k), *g);
  EXPECT_EQ(nonzero_charges(cfg), 2);
  EXPECT_EQ(charge_at(cfg, *g, A(1, 1)), 1);
  EXPECT_EQ(charge_at(cfg, *g, B(1, 1)), -1);
  EXPECT_TRUE(cfg.hardcore);
  for (double r : gauss_residual(cfg, *g)) EXPECT_EQ(r, 0.0);
}

TEST(Encode, StringIsContiguousPositivePath) {
  const auto g = make_geometry(5, 3, {A(1, 1), B(3, 1)});
  ASSERT_EQ(g->size(), 31U);
  const StringSet set = enumerate_strings(*g);
  const GaugeConfig cfg = encode(set.get("string_1").bits, *g);
  const std::set<int> path(set.region.begin(), set.region.end());
  ASSERT_EQ(path.size(), 3U);
  for (std::size_t k = 0; k < g->size(); ++k) {
    EXPECT_EQ(cfg.sz[k], path.count(static_cast<int>(k)) ? 0.5 : -0.5) << "atom " << k;
  }
  EXPECT_EQ(nonzero_charges(cfg), 0);
  // The path runs link by link between the vertices next to the two charges,
  // whose own links are removed.
  Site at = B(1, 1);
  for (int k : set.region) {
    const auto& atom = g->atoms()[k];
    ASSERT_TRUE(atom.from == at || atom.to == at) << "atom " << k << " does not continue the path";
    at = atom.from == at ? atom.to : atom.from;
  }
  EXPECT_EQ(at, A(3, 1));
  const GaugeConfig defects = encode(set.get("string_1").bits, *g);
  EXPECT_EQ(defects.static_charge[*g->vertex_index(A(1, 1))], 1);
  EXPECT_EQ(defects.static_charge[*g->vertex_index(B(3, 1))], -1);
}

TEST(Encode, BrokenAndChargeStatesScreenTheDefects) {
  const auto g = make_geometry(5, 3, {A(1, 1), B(3, 1)});
  const StringSet set = enumerate_strings(*g);
  const GaugeConfig b = encode(set.get("broken_b").bits, *g);
  EXPECT_EQ(nonzero_charges(b), 2);
  EXPECT_EQ(charge_at(b, *g, B(1, 1)), -1);
  EXPECT_EQ(charge_at(b, *g, A(3, 1)), 1);
  const GaugeConfig c = encode(set.get("charges_c").bits, *g);
  EXPECT_EQ(nonzero_charges(c), 4);
  EXPECT_EQ(charge_at(c, *g, A(2, 1)), 1);
  EXPECT_EQ(charge_at(c, *g, B(2, 1)), -1);
  for (const auto& cfg : {b, c}) {
    for (double r : gauss_residual(cfg, *g)) EXPECT_EQ(r, 0.0);
  }
}

TEST(Encode, BijectionOnBlockadedBasis) {
  const auto g = make_geometry(3, 2);
  const auto basis = BasisSpace::enumerate(g, BasisMode::Blockaded);
  std::set<std::vector<double>> seen;
  for (std::size_t k = 0; k < basis->size(); ++k) {
    const Bitstring s = basis->state(k);
    const GaugeConfig cfg = encode(s, *g);
    EXPECT_TRUE(cfg.hardcore);
    EXPECT_EQ(decode(cfg, *g), s);
    for (double r : gauss_residual(cfg, *g)) ASSERT_EQ(r, 0.0);
    seen.insert(cfg.sz);
  }
  EXPECT_EQ(seen.size(), basis->size());
}

TEST(Encode, HardcoreChargesCoincideWithBlockade) {
  for (const auto& g : rydlgt::testing::small_geometries()) {
    const Bitstring end = Bitstring{1} << g->size();
    for (Bitstring s = 0; s < end; ++s) {
      const GaugeConfig cfg = encode(s, *g, false);
      ASSERT_EQ(cfg.hardcore, satisfies_blockade(s, *g)) << format_bitstring(s, g->size());
      EXPECT_EQ(decode(cfg, *g), s);
    }
  }
}

TEST(Encode, StrictModeRejectsViolation) {
  const auto g = make_geometry(2, 2);
  EXPECT_THROW(encode(0b11, *g), ConfigError);
  EXPECT_NO_THROW(encode(0b11, *g, false));
}

TEST(GaussResidual, CorruptedLinkFlagsItsEndpoints) {
  const auto g = make_geometry(3, 3);
  GaugeConfig cfg = encode(vacuum_bitstring(*g), *g);
  for (std::size_t k = 0; k < g->size(); ++k) {
    GaugeConfig bad = cfg;
    bad.sz[k] = -bad.sz[k];
    const auto r = gauss_residual(bad, *g);
    std::set<int> flagged;
    for (std::size_t v = 0; v < r.size(); ++v) {
      if (r[v] != 0.0) flagged.insert(static_cast<int>(v));
    }
    EXPECT_EQ(flagged, endpoints(*g, static_cast<int>(k))) << "atom " << k;
    EXPECT_EQ(flagged.size(), 2U);
  }
}

TEST(GaugeStructure, ProjectedHamiltonianOnlyCreatesPairsOrHops) {
  for (const auto& g : rydlgt::testing::small_geometries()) {
    if (g->size() > 14) continue;
    const auto basis = BasisSpace::enumerate(g, BasisMode::Blockaded);
    const RydbergOperator op(basis, interaction_graph(*g, units::kOmegaMax * std::pow(1.2, 6)));
    const Eigen::MatrixXcd h = op.dense(DriveSample{units::kOmegaMax, 1.0, 0.3, 0.0}, 1U << 12);
    for (Eigen::Index r = 0; r < h.rows(); ++r) {
      for (Eigen::Index c = 0; c < h.cols(); ++c) {
        if (r == c || h(r, c) == cplx(0.0)) continue;
        const Bitstring x = basis->state(static_cast<std::size_t>(r));
        const Bitstring y = basis->state(static_cast<std::size_t>(c));
        ASSERT_EQ(std::popcount(x ^ y), 1);
        const int link = std::countr_zero(x ^ y);
        const GaugeConfig a = encode(x, *g);
        const GaugeConfig b = encode(y, *g);
        EXPECT_EQ(a.static_charge, b.static_charge);
        const std::set<int> ends = endpoints(*g, link);
        int total = 0;
        for (std::size_t v = 0; v < a.charge.size(); ++v) {
          const int dq = a.charge[v] - b.charge[v];
          total += dq;
          if (!ends.count(static_cast<int>(v))) EXPECT_EQ(dq, 0);
          else EXPECT_EQ(std::abs(dq), 1);
        }
        EXPECT_EQ(total, 0);
      }
    }
  }
}

TEST(Strings, SixMinimalStringsOnFiveByFive) {
  const auto g = make_geometry(5, 5, {A(1, 1), B(3, 3)});
  ASSERT_EQ(g->size(), 59U);
  const StringSet set = enumerate_strings(*g);
  EXPECT_EQ(set.of_kind(ConfigKind::String).size(), 6U);
  EXPECT_FALSE(set.straight());
  EXPECT_EQ(set.distance(), 4);
  for (const auto& c : set.of_kind(ConfigKind::String)) {
    EXPECT_TRUE(satisfies_blockade(c.bits, *g));
    EXPECT_EQ(nonzero_charges(encode(c.bits, *g)), 0);
    // Minimal strings flip 2d - 1 links.
    EXPECT_EQ(std::popcount(c.bits ^ vacuum_bitstring(*g)), 7);
  }
}

TEST(Strings, StraightLadder) {
  const auto g = make_geometry(5, 3, {A(1, 1), B(3, 1)});
  const StringSet set = enumerate_strings(*g);
  EXPECT_TRUE(set.straight());
  EXPECT_EQ(set.region.size(), 3U);
  EXPECT_EQ(set.of_kind(ConfigKind::String).size(), 1U);
  const auto region_bits = [&](const std::string& label) {
    std::string out;
    for (int k : set.region) out += bit(set.get(label).bits, k) ? '1' : '0';
    return out;
  };
  EXPECT_EQ(region_bits("string_1"), "101");
  EXPECT_EQ(region_bits("broken_b"), "010");
  EXPECT_EQ(region_bits("charges_c"), "000");
  EXPECT_EQ(region_bits("intermediate_j"), "001");
  EXPECT_EQ(region_bits("intermediate_i"), "100");
  EXPECT_EQ(region_bits("violation_v1"), "110");
  EXPECT_EQ(region_bits("violation_v2"), "011");
  EXPECT_EQ(region_bits("violation_v3"), "111");
  for (const auto& c : set.configs) {
    EXPECT_EQ(satisfies_blockade(c.bits, *g), c.kind != ConfigKind::Violation) << c.label;
  }
  // Outside the string region every ladder member agrees with the vacuum.
  Bitstring outside = vacuum_bitstring(*g);
  for (int k : set.region) outside &= ~(Bitstring{1} << k);
  for (const auto& c : set.configs) {
    Bitstring rest = c.bits;
    for (int k : set.region) rest &= ~(Bitstring{1} << k);
    EXPECT_EQ(rest, outside) << c.label;
  }
}

TEST(Strings, Errors) {
  EXPECT_THROW(enumerate_strings(*make_geometry(5, 3, {A(1, 1)})), ConfigError);
  EXPECT_THROW(enumerate_strings(*make_geometry(5, 3)), ConfigError);
  EXPECT_THROW(enumerate_strings(*make_geometry(5, 3, {A(1, 1), A(3, 1)})), ConfigError);
  EXPECT_THROW(enumerate_strings(*make_geometry(5, 3, {A(3, 1), B(1, 1)})), ConfigError);
  EXPECT_THROW(make_geometry(5, 3, {A(1, 1), B(1, 1)}), ConfigError);
  EXPECT_THROW((void)enumerate_strings(*make_geometry(5, 3, {A(1, 1), B(3, 1)})).get("string_9"), ConfigError);
}

TEST(Strings, MirrorPairedStringsHaveEqualGroundStateWeight) {
  // Exchanging the two lattice axes is a reflection of the patch that swaps
  // the two minimal strings between diagonal charges.
  const auto g = make_geometry(4, 4, {A(1, 1), B(2, 2)}, {{0, 0}, {3, 3}, {0, 3}, {3, 0}});
  const StringSet set = enumerate_strings(*g);
  ASSERT_EQ(set.of_kind(ConfigKind::String).size(), 2U);
  const auto basis = BasisSpace::enumerate(g, BasisMode::Blockaded);
  const RydbergOperator op(basis, interaction_graph(*g, units::kOmegaMax * std::pow(1.2, 6)));
  LanczosOptions o;
  o.tol = 1e-10;
  const GroundState gs = ground_state(op, DriveSample{units::kOmegaMax, 2.0 * units::kOmegaMax, 0.0, 0.0}, o);
  const auto p = [&](const std::string& label) { return gs.state.probability(set.get(label).bits); };
  EXPECT_GT(p("string_1"), 1e-4);
  EXPECT_NEAR(p("string_1"), p("string_2"), 1e-8);
}

TEST(Confinement, StringTension) {
  const double oracle = std::pow(1.2, 6) * (1.0 / 27.0 - 1.0 / 64.0);
  EXPECT_NEAR(string_tension(1.2, 1.0), oracle, 1e-12);
  EXPECT_NEAR(string_tension(1.2, 1.0), 0.063932, 1e-5);
  EXPECT_EQ(string_tension(1.2, 0.0), 0.0);
  EXPECT_GT(string_tension(1.6, 1.0), string_tension(1.2, 1.0));
  EXPECT_EQ(string_tension(1.2, 1.0, 1.5), 0.0);
  EXPECT_NEAR(string_tension(1.2, 1.0, 1.9), std::pow(1.2, 6) / 27.0, 1e-12);
}

TEST(Confinement, RenormalizedMass) {
  EXPECT_NEAR(renormalized_mass(2.3, 1.2, 1.0), 2.3 - 6.0 * std::pow(0.6, 6), 1e-12);
  EXPECT_NEAR(renormalized_mass(2.3, 1.2, 1.0), 2.020064, 1e-6);
  EXPECT_EQ(renormalized_mass(1.7, 1.2, 0.0), 1.7);
  EXPECT_NEAR(renormalized_mass(6.0, 2.0, 1.0), 0.0, 1e-12);
}

TEST(Confinement, ClassicalCrossing) {
  EXPECT_NEAR(classical_crossing(2, 2.3, 1.2, 1.0), 0.946, 1e-3);
  EXPECT_NEAR(classical_crossing(3, 2.3, 1.2, 1.0), 0.609, 1e-3);
  EXPECT_NEAR(classical_crossing(1, 2.3, 1.2, 1.0, 1.5), renormalized_mass(2.3, 1.2, 1.0), 1e-12);
  EXPECT_LT(classical_crossing(3, 2.3, 1.2, 1.0), classical_crossing(2, 2.3, 1.2, 1.0));
  EXPECT_THROW(classical_crossing(0, 2.3, 1.2, 1.0), ConfigError);
  // Scales with Omega.
  EXPECT_NEAR(classical_crossing(2, 2.3 * 7.0, 1.2, 7.0), 7.0 * 0.946, 7e-3);
}

TEST(Confinement, ExactCrossingAgreesWithFormula) {
  const double omega = units::kOmegaMax;
  for (int d : {2, 3}) {
    const auto g = make_geometry(d + 3, 3, {A(1, 1), B(1 + d, 1)});
    const StringSet set = enumerate_strings(*g);
    const double exact = classical_crossing_exact(set, interaction_graph(*g, omega * std::pow(1.2, 6)), 2.3 * omega);
    EXPECT_NEAR(exact / omega, classical_crossing(d, 2.3, 1.2, 1.0), 0.05) << "d = " << d;
  }
}

TEST(Confinement, StringEnergyGrowsWithTension) {
  const double omega = units::kOmegaMax;
  const double sigma = string_tension(1.2, omega);
  const auto slopes = [&](double cutoff) {
    std::vector<double> cost;
    for (int d : {2, 3, 4}) {
      const auto g = make_geometry(d + 4, 3, {A(2, 1), B(2 + d, 1)});
      const StringSet set = enumerate_strings(*g);
      const CouplingTable v = interaction_graph(*g, omega * std::pow(1.2, 6), cutoff);
      const DriveSample drive{omega, 2.3 * omega, 0.0, 0.0};
      cost.push_back(classical_energy(set.get("string_1").bits, v, drive) -
                     classical_energy(set.get("broken_b").bits, v, drive));
    }
    return std::pair{(cost[1] - cost[0]) / sigma, (cost[2] - cost[1]) / sigma};
  };
  // Untruncated couplings: the tails beyond 2a cancel on average.
  const auto [s0, s1] = slopes(100.0);
  EXPECT_NEAR(s0, 1.0, 0.05);
  EXPECT_NEAR(s1, 1.0, 0.05);
  // The default cutoff keeps the sqrt(7) and 3a shells but drops the farther
  // ones that compensate them: still linear, but steeper.
  const auto [t0, t1] = slopes(kDefaultCutoff);
  EXPECT_NEAR(t0, t1, 1e-9);
  EXPECT_GT(t0, 1.0);
  EXPECT_LT(t0, 1.1);
}
