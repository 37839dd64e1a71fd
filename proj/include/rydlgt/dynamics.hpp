#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rydlgt/hamiltonian.hpp"
#include "rydlgt/krylov.hpp"
#include "rydlgt/schedule.hpp"
#include "rydlgt/units.hpp"

namespace rydlgt {

struct GroundState {
  double energy = 0.0;
  QuantumState state;
  double residual = 0.0;
};

/// Lowest eigenpair of H(sample). Throws NumericalError on non-convergence.
GroundState ground_state(const RydbergOperator& op, const DriveSample& sample, const LanczosOptions& options = {});

struct EvolveOptions {
  double dt = 0.0;  // us; 0 selects 0.025 / Omega_max of the schedule
  KrylovOptions krylov;
  double norm_tol = 1e-8;
  bool keep_states = true;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<QuantumState> states;  // empty unless keep_states
  QuantumState final_state;
  BasisMode mode = BasisMode::Blockaded;
  std::size_t steps = 0;
  double max_norm_drift = 0.0;
  std::size_t renormalizations = 0;
  double max_step_error = 0.0;
};

/// Called at every sample time with the current state.
using Observer = std::function<void(double t, const QuantumState& psi)>;

/// Propagates psi0 under the schedule with midpoint-sampled piecewise-constant
/// steps of at most dt. Sample times must be sorted, non-negative and within
/// t_end. The operator's pattern is replaced by the schedule's.
Trajectory evolve(const QuantumState& psi0, const RydbergOperator& op, const DriveSchedule& schedule,
                  std::span<const double> sample_times, const EvolveOptions& options = {},
                  const Observer& observer = {});

/// Default step 0.025 / Omega.
double default_time_step(double omega_max);

/// Ramp and sweep durations of the quasi-adiabatic protocol.
struct SweepTiming {
  double ramp = 0.25;
  double sweep = 2.5;
  double delta_start_over_omega = -2.5;
  bool ramp_down = true;

  /// Ramp 0.25 us, sweep 1.5 us, drive left on for the quench.
  static SweepTiming quench_preparation() { return {0.25, 1.5, -2.5, false}; }
  double total() const { return ramp + sweep + (ramp_down ? ramp : 0.0); }
};

/// Omega ramp 0 -> omega, linear delta sweep to delta_final, optional ramp
/// down. No local detuning.
DriveSchedule sweep_schedule(std::size_t atom_count, double omega, double delta_final, const SweepTiming& timing = {});

/// The sweep with delta_0(t) = delta(t) - delta(0) on the pattern, so patterned
/// atoms keep their starting detuning throughout.
DriveSchedule assisted_schedule(std::vector<double> pattern, double omega, double delta_final,
                                const SweepTiming& timing = {});

/// c = 1 on the atoms that are in the ground state in `target`.
std::vector<double> ground_atom_pattern(Bitstring target, std::size_t atom_count);

/// All-ground start evolved under sweep_schedule.
QuantumState sweep_prepare(const RydbergOperator& op, double omega, double delta_final,
                           const SweepTiming& timing = {}, const EvolveOptions& options = {});

struct AssistedResult {
  QuantumState state;
  double fidelity = 0.0;
  std::vector<double> pattern;
};

/// Assisted sweep towards `target`. Throws ConfigError if target violates the
/// blockade or is missing from the basis.
AssistedResult assisted_prepare(const RydbergOperator& op, Bitstring target, double omega, double delta_final,
                                const SweepTiming& timing = {}, const EvolveOptions& options = {});

/// Constant drive with local detuning delta0 on `pattern` from psi0, sampled
/// at `times` (default horizon 1.6 us).
Trajectory quench(const QuantumState& psi0, const RydbergOperator& op, const DriveSample& drive,
                  std::vector<double> pattern, std::span<const double> times, const EvolveOptions& options = {},
                  const Observer& observer = {});

inline constexpr double kQuenchHorizon = 1.6;

}  // namespace rydlgt
