#pragma once

#include <cstdint>
#include <vector>

#include "rydlgt/geometry.hpp"
#include "rydlgt/hilbert.hpp"
#include "rydlgt/stats.hpp"

namespace rydlgt {

struct NoiseModel {
  double sigma_thermal_um = 0.2;  // per axis, redrawn every realization
  double sigma_static_um = 0.1;   // per axis, drawn once per ensemble
  DetectionModel detection;

  void validate() const;  // throws ConfigError
};

/// Couplings of `count` jittered copies of the array. Positions are scaled
/// by a_um to convert the jitter; c6 is in units of a^6. Realization r uses
/// stream derive_seed(seed, r + 1), the static offsets stream 0.
std::vector<CouplingTable> thermal_ensemble(const Geometry& geom, double c6, const NoiseModel& noise,
                                            std::size_t count, std::uint64_t seed,
                                            double cutoff = kDefaultCutoff);

/// Quadrature sum over excited atoms of the standard deviation of each atom's
/// interaction energy with the other excited atoms, to first order in the
/// thermal jitter.
double meanfield_energy_spread(Bitstring config, const Geometry& geom, double c6, const NoiseModel& noise,
                               double cutoff = kDefaultCutoff);

}  // namespace rydlgt
