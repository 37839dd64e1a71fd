#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rydlgt/dynamics.hpp"
#include "rydlgt/gaussian_fit.hpp"
#include "rydlgt/lgt.hpp"
#include "rydlgt/stats.hpp"

namespace rydlgt {

/// Runs fn(0..count-1) on up to `threads` workers. Exceptions are rethrown
/// after all workers finish, lowest index first.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

struct ScanPoint {
  std::size_t index = 0;
  double x = 0.0;
  double y = 0.0;
  double energy = 0.0;  // ground energy / Omega, 0 when not computed
  std::vector<ProbabilityRow> rows;
};

/// Rectangular grid, points in row-major order over (x, y).
struct ScanResult {
  std::string x_name;
  std::string y_name;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<ScanPoint> points;

  const ScanPoint& at(std::size_t ix, std::size_t iy) const { return points[ix * y.size() + iy]; }
};

/// Resume support: `lookup` returns a finished point if one is cached,
/// `on_point` is called (serialized) once a new point is done.
struct ScanHooks {
  std::function<std::optional<ScanPoint>(std::size_t index, double x, double y)> lookup;
  std::function<void(const ScanPoint&)> on_point;
};

enum class PhaseMethod { GroundState, Sweep };

struct PhaseScanOptions {
  std::vector<double> rb_grid;
  std::vector<double> delta_grid;  // delta / Omega
  PhaseMethod method = PhaseMethod::GroundState;
  double omega = units::kOmegaMax;
  double cutoff = kDefaultCutoff;
  SweepTiming timing;
  EvolveOptions evolve;
  LanczosOptions lanczos;
  std::size_t shots = 0;  // 0: exact probabilities
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// p_s, p_b and the other labelled probabilities over (R_b, delta/Omega).
ScanResult scan_phase_diagram(const std::shared_ptr<const BasisSpace>& basis, const StringSet& strings,
                              const FilterRegion& region, const PhaseScanOptions& options,
                              const ScanHooks& hooks = {});

enum class InitialState { Sweep, GroundState };

struct ResonanceScanOptions {
  double rb = 1.2;
  double delta_over_omega = 2.3;
  std::vector<double> delta0_grid;  // delta_0 / Omega
  double t_probe = 0.4;
  InitialState initial = InitialState::Sweep;
  double omega = units::kOmegaMax;
  double cutoff = kDefaultCutoff;
  SweepTiming timing = SweepTiming::quench_preparation();
  EvolveOptions evolve;
  LanczosOptions lanczos;
  std::size_t fit_points = 0;  // 0: rising_window of p_b
  std::size_t shots = 0;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct ResonanceResult {
  ScanResult scan;  // x = delta_0 / Omega, y = {t_probe}
  GaussianFit fit;  // on p_b
  std::vector<ProbabilityRow> initial_rows;
  double crossing_formula = 0.0;
  double crossing_exact = 0.0;
};

/// Prepares the string state, quenches with delta_0 on the ground atoms of b
/// and records probabilities at t_probe for every delta_0.
ResonanceResult scan_resonance(const std::shared_ptr<const BasisSpace>& basis, const StringSet& strings,
                               const FilterRegion& region, const ResonanceScanOptions& options,
                               const ScanHooks& hooks = {});

/// Series of one label along the x axis at fixed y index.
std::vector<double> series(const ScanResult& scan, const std::string& label, std::size_t iy = 0);

}  // namespace rydlgt
