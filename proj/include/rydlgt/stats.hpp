#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rydlgt/hilbert.hpp"
#include "rydlgt/lgt.hpp"

namespace rydlgt {

enum class Provenance { Simulated, File };

struct ShotSet {
  std::size_t atom_count = 0;
  std::vector<Bitstring> shots;
  Provenance provenance = Provenance::Simulated;
  std::uint64_t seed = 0;
  std::string geometry_file;
};

/// i.i.d. draws from |psi|^2. Throws ConfigError if psi is not normalized.
ShotSet sample_shots(const QuantumState& psi, std::size_t n, std::uint64_t seed);

/// Readout fidelities: a Rydberg atom reads 1 with p_r, a ground atom 0 with p_g.
struct DetectionModel {
  double p_r = 0.95;
  double p_g = 0.99;
};

/// Flips every bit independently; shot k uses stream derive_seed(seed, k).
ShotSet apply_detection_errors(const ShotSet& shots, const DetectionModel& model, std::uint64_t seed);

/// p_g^{n_g} p_r^{n_r} for a configuration with n_r excited atoms out of n.
double perfect_read_probability(std::size_t n_ground, std::size_t n_rydberg, const DetectionModel& model);

/// Atoms on which shots are compared with a configuration. Order matters for
/// violation runs.
struct FilterRegion {
  std::string name;
  std::vector<int> atoms;
};

/// The string region itself.
FilterRegion aggressive_filter(const StringSet& strings);
/// The string region plus every atom within `margin` (units of a) of it.
FilterRegion conservative_filter(const StringSet& strings, const Geometry& geom, double margin = 1.0);

struct ProbabilityRow {
  std::string label;
  std::size_t k = 0;
  std::size_t n = 0;
  double p = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

inline constexpr double kClopperPearsonAlpha = 0.32;

/// One row per non-violation config plus "p_s", the sum over minimal strings.
/// Throws ConfigError if the region holds atoms outside the shots.
std::vector<ProbabilityRow> string_probabilities(const ShotSet& shots, const StringSet& strings,
                                                 const FilterRegion& region);

/// Exact counterpart of string_probabilities from amplitudes (k, n and the
/// interval are left at zero).
std::vector<ProbabilityRow> string_probabilities(const QuantumState& psi, const StringSet& strings,
                                                 const FilterRegion& region);

/// Looks up a row by label; throws ConfigError if missing.
double probability_of(const std::vector<ProbabilityRow>& rows, const std::string& label);

enum class Violation { None, V1, V2, V3 };

/// Buckets a shot by the runs of consecutive excitations along the region:
/// any run of 3 or more is V3, otherwise the first run of exactly 2 is V1 if
/// it starts at an even position and V2 if odd.
Violation classify_violation(Bitstring s, const FilterRegion& region);

/// Rows "p_v1", "p_v2", "p_v3".
std::vector<ProbabilityRow> violation_probabilities(const ShotSet& shots, const FilterRegion& region);
std::vector<ProbabilityRow> violation_probabilities(const QuantumState& psi, const FilterRegion& region);

/// Exact binomial interval with central coverage 1 - alpha.
std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double alpha = kClopperPearsonAlpha);

}  // namespace rydlgt
