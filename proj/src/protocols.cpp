#include <algorithm>
#include <cmath>
#include <iostream>

#include "rydlgt/dynamics.hpp"
#include "rydlgt/error.hpp"

namespace rydlgt {

namespace {

// Fixes the global phase so the largest amplitude is real and positive.
void canonical_phase(std::vector<cplx>& v) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (std::abs(v[k]) > std::abs(v[best]) + 1e-12) best = k;
  }
  if (v.empty() || std::abs(v[best]) == 0.0) return;
  const cplx phase = std::conj(v[best]) / std::abs(v[best]);
  for (auto& a : v) a *= phase;
}

}  // namespace

GroundState ground_state(const RydbergOperator& op, const DriveSample& sample, const LanczosOptions& options) {
  const MatVec apply = [&](std::span<const cplx> in, std::span<cplx> out) { op.apply(sample, in, out); };
  Eigenpair pair = lowest_eigenpair(op.dim(), apply, options);
  canonical_phase(pair.vector);
  return GroundState{pair.value, QuantumState(op.basis_ptr(), std::move(pair.vector)), pair.residual};
}

double default_time_step(double omega_max) {
  return 0.025 / (omega_max > 0.0 ? omega_max : units::kOmegaMax);
}

Trajectory evolve(const QuantumState& psi0, const RydbergOperator& op, const DriveSchedule& schedule,
                  std::span<const double> sample_times, const EvolveOptions& options, const Observer& observer) {
  if (psi0.basis_ptr() != op.basis_ptr()) throw ConfigError("initial state and operator live on different bases");
  schedule.validate(op.basis().atom_count());
  for (std::size_t k = 0; k < sample_times.size(); ++k) {
    const double t = sample_times[k];
    if (!(t >= 0.0) || t > schedule.t_end + 1e-12) throw ConfigError("sample time outside the schedule");
    if (k > 0 && t < sample_times[k - 1]) throw ConfigError("sample times must be sorted");
  }
  const double dt = options.dt > 0.0 ? options.dt : default_time_step(schedule.omega_max());

  const bool same_pattern = std::equal(op.pattern().begin(), op.pattern().end(), schedule.pattern.begin(),
                                       schedule.pattern.end());
  const RydbergOperator h = same_pattern ? op : op.with_pattern(schedule.pattern);

  Trajectory traj;
  traj.mode = op.basis().mode();
  std::vector<cplx> psi(psi0.amplitudes().begin(), psi0.amplitudes().end());
  const double norm0 = std::sqrt(norm2(psi));
  KrylovPropagator propagator(options.krylov);
  DriveSample sample;
  const MatVec apply = [&](std::span<const cplx> in, std::span<cplx> out) { h.apply(sample, in, out); };

  double t = 0.0;
  for (const double target : sample_times) {
    const double span = target - t;
    if (span > 1e-14) {
      const auto n = static_cast<std::size_t>(std::ceil(span / dt - 1e-9));
      const double step = span / static_cast<double>(n);
      for (std::size_t s = 0; s < n; ++s) {
        const double t0 = t + step * static_cast<double>(s);
        sample = schedule.at(t0 + 0.5 * step);
        const KrylovStepInfo info = propagator.step(apply, psi, step);
        traj.max_step_error = std::max(traj.max_step_error, info.error);
        ++traj.steps;
        const double nrm = std::sqrt(norm2(psi));
        const double drift = std::abs(nrm - norm0);
        traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
        if (drift > options.norm_tol) {
          std::clog << "rydlgt: renormalized state at t = " << t0 + step << " us (drift " << drift << ")\n";
          for (auto& a : psi) a *= norm0 / nrm;
          ++traj.renormalizations;
        }
      }
    }
    t = target;
    traj.times.push_back(t);
    if (options.keep_states || observer) {
      QuantumState snapshot(op.basis_ptr(), psi);
      if (observer) observer(t, snapshot);
      if (options.keep_states) traj.states.push_back(std::move(snapshot));
    }
  }
  traj.final_state = QuantumState(op.basis_ptr(), std::move(psi));
  return traj;
}

DriveSchedule sweep_schedule(std::size_t atom_count, double omega, double delta_final, const SweepTiming& timing) {
  if (!(timing.ramp > 0.0) || !(timing.sweep > 0.0)) throw ConfigError("sweep timing must be positive");
  const double delta_start = timing.delta_start_over_omega * omega;
  const double t1 = timing.ramp;
  const double t2 = timing.ramp + timing.sweep;
  const double t_end = timing.total();
  std::vector<Breakpoint> om{{0.0, 0.0}, {t1, omega}, {t2, omega}};
  std::vector<Breakpoint> de{{0.0, delta_start}, {t1, delta_start}, {t2, delta_final}};
  if (timing.ramp_down) {
    om.push_back({t_end, 0.0});
    de.push_back({t_end, delta_final});
  }
  DriveSchedule s;
  s.omega = Waveform(std::move(om));
  s.delta = Waveform(std::move(de));
  s.phi = Waveform::constant(0.0, t_end);
  s.delta_local = Waveform::constant(0.0, t_end);
  s.pattern.assign(atom_count, 0.0);
  s.t_end = t_end;
  return s;
}

DriveSchedule assisted_schedule(std::vector<double> pattern, double omega, double delta_final,
                                const SweepTiming& timing) {
  DriveSchedule s = sweep_schedule(pattern.size(), omega, delta_final, timing);
  const double rise = delta_final - timing.delta_start_over_omega * omega;
  const double t1 = timing.ramp;
  const double t2 = timing.ramp + timing.sweep;
  std::vector<Breakpoint> local{{0.0, 0.0}, {t1, 0.0}, {t2, rise}};
  if (timing.ramp_down) local.push_back({s.t_end, rise});
  s.delta_local = Waveform(std::move(local));
  s.pattern = std::move(pattern);
  return s;
}

std::vector<double> ground_atom_pattern(Bitstring target, std::size_t atom_count) {
  std::vector<double> c(atom_count);
  for (std::size_t k = 0; k < atom_count; ++k) c[k] = bit(target, static_cast<int>(k)) ? 0.0 : 1.0;
  return c;
}

QuantumState sweep_prepare(const RydbergOperator& op, double omega, double delta_final, const SweepTiming& timing,
                           const EvolveOptions& options) {
  const DriveSchedule s = sweep_schedule(op.basis().atom_count(), omega, delta_final, timing);
  EvolveOptions opts = options;
  opts.keep_states = false;
  const double end[] = {s.t_end};
  return evolve(QuantumState::basis_state(op.basis_ptr(), 0), op, s, end, opts).final_state;
}

AssistedResult assisted_prepare(const RydbergOperator& op, Bitstring target, double omega, double delta_final,
                                const SweepTiming& timing, const EvolveOptions& options) {
  const std::size_t n = op.basis().atom_count();
  if (!satisfies_blockade(target, op.basis().geometry())) {
    throw ConfigError("target " + format_bitstring(target, n) + " violates the blockade constraint");
  }
  if (!op.basis().contains(target)) throw ConfigError("target is not in the basis");
  AssistedResult result;
  result.pattern = ground_atom_pattern(target, n);
  const DriveSchedule s = assisted_schedule(result.pattern, omega, delta_final, timing);
  EvolveOptions opts = options;
  opts.keep_states = false;
  const double end[] = {s.t_end};
  result.state = evolve(QuantumState::basis_state(op.basis_ptr(), 0), op, s, end, opts).final_state;
  result.fidelity = result.state.probability(target);
  return result;
}

Trajectory quench(const QuantumState& psi0, const RydbergOperator& op, const DriveSample& drive,
                  std::vector<double> pattern, std::span<const double> times, const EvolveOptions& options,
                  const Observer& observer) {
  if (times.empty()) throw ConfigError("quench needs at least one sample time");
  const DriveSchedule s = constant_schedule(drive, std::move(pattern), times.back());
  return evolve(psi0, op, s, times, options, observer);
}

}  // namespace rydlgt
