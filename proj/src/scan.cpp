#include "rydlgt/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "rydlgt/error.hpp"
#include "rydlgt/random.hpp"

namespace rydlgt {

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < n; ++w) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

void check_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw ConfigError(std::string(name) + " grid is empty");
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!(g[k] > g[k - 1])) throw ConfigError(std::string(name) + " grid must be strictly increasing");
  }
}

std::vector<ProbabilityRow> measure(const QuantumState& psi, const StringSet& strings, const FilterRegion& region,
                                    std::size_t shots, std::uint64_t seed) {
  std::vector<ProbabilityRow> rows;
  std::vector<ProbabilityRow> violations;
  if (shots == 0) {
    rows = string_probabilities(psi, strings, region);
    violations = violation_probabilities(psi, region);
  } else {
    const ShotSet set = sample_shots(psi, shots, seed);
    rows = string_probabilities(set, strings, region);
    violations = violation_probabilities(set, region);
  }
  rows.insert(rows.end(), violations.begin(), violations.end());
  return rows;
}

RydbergOperator operator_at(const RydbergOperator& base, double rb, double omega, double cutoff) {
  return base.with_couplings(interaction_graph(base.basis().geometry(), omega * std::pow(rb, 6), cutoff));
}

// Per-point worker threads when the grid is large enough, else threads in apply.
unsigned inner_threads(std::size_t points, unsigned threads) { return points >= threads ? 1U : threads; }

}  // namespace

ScanResult scan_phase_diagram(const std::shared_ptr<const BasisSpace>& basis, const StringSet& strings,
                              const FilterRegion& region, const PhaseScanOptions& options, const ScanHooks& hooks) {
  check_grid(options.rb_grid, "R_b");
  check_grid(options.delta_grid, "delta/Omega");
  ScanResult result;
  result.x_name = "rb";
  result.y_name = "delta_over_omega";
  result.x = options.rb_grid;
  result.y = options.delta_grid;
  const std::size_t count = result.x.size() * result.y.size();
  result.points.resize(count);

  RydbergOperator base(basis, interaction_graph(basis->geometry(), options.omega, options.cutoff));
  base.set_threads(inner_threads(count, options.threads));
  std::mutex report;

  parallel_for(count, options.threads, [&](std::size_t index) {
    const double rb = result.x[index / result.y.size()];
    const double ratio = result.y[index % result.y.size()];
    if (hooks.lookup) {
      if (auto cached = hooks.lookup(index, rb, ratio)) {
        result.points[index] = std::move(*cached);
        return;
      }
    }
    const RydbergOperator op = operator_at(base, rb, options.omega, options.cutoff);
    const std::uint64_t seed = derive_seed(options.seed, index);
    ScanPoint point{index, rb, ratio, 0.0, {}};
    QuantumState psi;
    if (options.method == PhaseMethod::GroundState) {
      LanczosOptions lanczos = options.lanczos;
      lanczos.seed = seed;
      DriveSample sample{options.omega, ratio * options.omega, 0.0, 0.0};
      GroundState gs = ground_state(op, sample, lanczos);
      point.energy = gs.energy / options.omega;
      psi = std::move(gs.state);
    } else {
      psi = sweep_prepare(op, options.omega, ratio * options.omega, options.timing, options.evolve);
    }
    point.rows = measure(psi, strings, region, options.shots, derive_seed(seed, 1));
    result.points[index] = point;
    if (hooks.on_point) {
      std::lock_guard lock(report);
      hooks.on_point(point);
    }
  });
  return result;
}

ResonanceResult scan_resonance(const std::shared_ptr<const BasisSpace>& basis, const StringSet& strings,
                               const FilterRegion& region, const ResonanceScanOptions& options,
                               const ScanHooks& hooks) {
  check_grid(options.delta0_grid, "delta_0/Omega");
  if (!(options.t_probe > 0.0)) throw ConfigError("probe time must be positive");
  const double omega = options.omega;
  const double delta = options.delta_over_omega * omega;
  const std::size_t count = options.delta0_grid.size();

  const RydbergOperator op = [&] {
    RydbergOperator base(basis, interaction_graph(basis->geometry(), omega, options.cutoff));
    base.set_threads(inner_threads(count, options.threads));
    return operator_at(base, options.rb, omega, options.cutoff);
  }();

  ResonanceResult out;
  out.crossing_formula = classical_crossing(strings.distance(), delta, options.rb, omega, options.cutoff) / omega;
  out.crossing_exact = classical_crossing_exact(strings, op.couplings(), delta) / omega;

  QuantumState initial;
  if (options.initial == InitialState::GroundState) {
    LanczosOptions lanczos = options.lanczos;
    lanczos.seed = derive_seed(options.seed, count);
    initial = ground_state(op, DriveSample{omega, delta, 0.0, 0.0}, lanczos).state;
  } else {
    initial = sweep_prepare(op, omega, delta, options.timing, options.evolve);
  }
  out.initial_rows = measure(initial, strings, region, 0, 0);

  const std::vector<double> pattern = ground_atom_pattern(strings.get("broken_b").bits, basis->atom_count());
  const RydbergOperator quench_op = op.with_pattern(pattern);

  ScanResult& scan = out.scan;
  scan.x_name = "delta0_over_omega";
  scan.y_name = "t_us";
  scan.x = options.delta0_grid;
  scan.y = {options.t_probe};
  scan.points.resize(count);
  std::mutex report;
  parallel_for(count, options.threads, [&](std::size_t index) {
    const double ratio = scan.x[index];
    if (hooks.lookup) {
      if (auto cached = hooks.lookup(index, ratio, options.t_probe)) {
        scan.points[index] = std::move(*cached);
        return;
      }
    }
    EvolveOptions evolve = options.evolve;
    evolve.keep_states = false;
    const double times[] = {options.t_probe};
    const DriveSample drive{omega, delta, 0.0, ratio * omega};
    const Trajectory traj = quench(initial, quench_op, drive, pattern, times, evolve);
    ScanPoint point{index, ratio, options.t_probe, 0.0, {}};
    point.rows = measure(traj.final_state, strings, region, options.shots, derive_seed(options.seed, index));
    scan.points[index] = point;
    if (hooks.on_point) {
      std::lock_guard lock(report);
      hooks.on_point(point);
    }
  });

  const std::vector<double> pb = series(scan, "broken_b");
  const std::size_t window = options.fit_points > 0 ? std::min(options.fit_points, count) : rising_window(pb);
  out.fit = fit_gaussian(std::span(scan.x).first(window), std::span(pb).first(window));
  const auto peak = static_cast<std::size_t>(std::max_element(pb.begin(), pb.end()) - pb.begin());
  if (peak == 0 || peak + 1 == count) {
    out.fit.reliable = false;
    out.fit.note = "p_b maximum lies on the edge of the scanned range";
  }
  return out;
}

std::vector<double> series(const ScanResult& scan, const std::string& label, std::size_t iy) {
  std::vector<double> out;
  for (std::size_t ix = 0; ix < scan.x.size(); ++ix) out.push_back(probability_of(scan.at(ix, iy).rows, label));
  return out;
}

}  // namespace rydlgt
