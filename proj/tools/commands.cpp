#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rydlgt/error.hpp"
#include "rydlgt/io.hpp"
#include "rydlgt/lgt.hpp"
#include "rydlgt/random.hpp"
#include "rydlgt/stats.hpp"
#include "rydlgt/svg.hpp"

#ifndef RYDLGT_VERSION
#define RYDLGT_VERSION "unknown"
#endif

namespace rydlgt::cli {

namespace fs = std::filesystem;

namespace {

// Collects outputs and writes manifest.json when the command finishes.
class Run {
 public:
  Run(const RunConfig& config, std::string command)
      : config_(config), command_(std::move(command)), start_(std::chrono::steady_clock::now()) {
    fs::create_directories(config.output);
  }

  void write(const std::string& name, const std::string& content) {
    io::write_text_file(config_.output / name, content);
    outputs_.push_back(name);
  }

  void note(const std::string& key, json value) { extra_[key] = std::move(value); }

  void finish() {
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    json m;
    m["command"] = command_;
    m["code_version"] = RYDLGT_VERSION;
    m["config"] = config_.raw;
    m["effective"] = {{"seed", config_.seed},
                      {"threads", config_.threads},
                      {"basis", to_string(config_.basis)},
                      {"output", config_.output.string()},
                      {"units", config_.units == UnitSystem::Reduced ? "reduced" : "physical"},
                      {"omega_mhz", units::to_mhz(config_.physics.omega)},
                      {"rb_over_a", config_.physics.rb},
                      {"delta_over_omega", config_.physics.delta_over_omega},
                      {"cutoff", config_.physics.cutoff},
                      {"dt_us", config_.dt}};
    m["geometry"] = {{"source", config_.geometry_source}, {"atom_count", config_.geometry->size()}};
    m["wall_clock"] = {{"elapsed_s", elapsed},
                       {"budget_s", config_.budget_s},
                       {"within_budget", config_.budget_s <= 0.0 || elapsed <= config_.budget_s}};
    m["outputs"] = outputs_;
    for (auto& [k, v] : extra_.items()) m[k] = v;
    io::write_text_file(config_.output / "manifest.json", m.dump(2) + "\n");
  }

 private:
  const RunConfig& config_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::string> outputs_;
  json extra_ = json::object();
};

std::shared_ptr<const BasisSpace> make_basis(const RunConfig& config, Run& run) {
  auto basis = BasisSpace::enumerate(config.geometry, config.basis);
  run.note("basis", {{"mode", to_string(basis->mode())}, {"size", basis->size()}});
  return basis;
}

RydbergOperator make_operator(const RunConfig& config, const std::shared_ptr<const BasisSpace>& basis) {
  const double c6 = config.physics.omega * std::pow(config.physics.rb, 6);
  RydbergOperator op(basis, interaction_graph(*config.geometry, c6, config.physics.cutoff));
  op.set_threads(config.threads);
  return op;
}

EvolveOptions evolve_options(const RunConfig& config) {
  EvolveOptions e;
  e.dt = config.dt;
  return e;
}

// Quench preparation keeps the drive on unless the config spells out a sweep.
SweepTiming preparation_timing(const RunConfig& config) {
  return config.raw.contains("sweep") ? config.timing : SweepTiming::quench_preparation();
}

// Resume cache: valid only while cache.key matches the run fingerprint.
class ScanCache {
 public:
  ScanCache(const fs::path& dir, const json& fingerprint) : file_(dir / "cache.jsonl") {
    const fs::path key_file = dir / "cache.key";
    const std::string key = fingerprint.dump();
    std::string stored;
    if (std::ifstream in(key_file); in) std::getline(in, stored);
    std::vector<std::string> kept;
    if (stored == key) {
      std::ifstream in(file_);
      for (std::string line; std::getline(in, line);) {
        try {
          ScanPoint p = io::point_from_line(line);
          kept.push_back(line);
          points_[p.index] = std::move(p);
        } catch (const ConfigError&) {
          break;  // truncated tail of an interrupted run
        }
      }
    }
    io::write_text_file(key_file, key + "\n");
    out_.open(file_, std::ios::trunc);
    for (const auto& l : kept) out_ << l << "\n";
    out_.flush();
  }

  std::size_t cached() const { return points_.size(); }

  ScanHooks hooks(std::size_t total, const Progress& progress) {
    ScanHooks h;
    h.lookup = [this](std::size_t index, double x, double y) -> std::optional<ScanPoint> {
      const auto it = points_.find(index);
      if (it == points_.end() || it->second.x != x || it->second.y != y) return std::nullopt;
      return it->second;
    };
    h.on_point = [this, total, progress](const ScanPoint& p) {
      out_ << io::point_to_line(p) << "\n";
      out_.flush();
      ++done_;
      if (progress) progress(std::to_string(done_ + points_.size()) + "/" + std::to_string(total) + " points");
    };
    return h;
  }

 private:
  fs::path file_;
  std::map<std::size_t, ScanPoint> points_;
  std::ofstream out_;
  std::size_t done_ = 0;
};

std::string csv(const ScanResult& scan) {
  std::ostringstream out;
  io::write_scan_csv(out, scan);
  return out.str();
}

// Labels shown in time-series plots: aggregates and named states, not each
// individual minimal string.
bool plotted(const std::string& label) { return label.rfind("string_", 0) != 0; }

std::vector<ProbabilityRow> exact_rows(const QuantumState& psi, const StringSet& strings, const FilterRegion& region) {
  std::vector<ProbabilityRow> rows = string_probabilities(psi, strings, region);
  const auto v = violation_probabilities(psi, region);
  rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

std::vector<ProbabilityRow> shot_rows(const ShotSet& shots, const StringSet& strings, const FilterRegion& region) {
  std::vector<ProbabilityRow> rows = string_probabilities(shots, strings, region);
  const auto v = violation_probabilities(shots, region);
  rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

std::vector<double> occupations(const QuantumState& psi) {
  std::vector<double> n(psi.basis().atom_count(), 0.0);
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double p = std::norm(psi[k]);
    if (p == 0.0) continue;
    const Bitstring s = psi.basis().state(k);
    for (std::size_t a = 0; a < n.size(); ++a) {
      if (bit(s, static_cast<int>(a))) n[a] += p;
    }
  }
  return n;
}

QuantumState initial_state(const RunConfig& config, const RydbergOperator& op, InitialState kind) {
  const double omega = config.physics.omega;
  const double delta = config.physics.delta_over_omega * omega;
  if (kind == InitialState::GroundState) {
    LanczosOptions lanczos;
    lanczos.seed = config.seed;
    return ground_state(op, DriveSample{omega, delta, 0.0, 0.0}, lanczos).state;
  }
  return sweep_prepare(op, omega, delta, preparation_timing(config), evolve_options(config));
}

}  // namespace

void cmd_geometry(const RunConfig& config, const Progress&) {
  Run run(config, "geometry");
  const Geometry& geom = *config.geometry;
  run.write("geometry.json", io::geometry_to_json(geom).dump(2) + "\n");
  svg::LatticeOverlay overlay;
  if (!config.overlay.empty()) {
    Bitstring bits = 0;
    if (config.overlay == "vacuum") {
      bits = vacuum_bitstring(geom);
    } else if (geom.defects().size() == 2 && config.overlay.find_first_not_of("01") != std::string::npos) {
      bits = enumerate_strings(geom).get(config.overlay).bits;
    } else {
      bits = parse_bitstring(config.overlay, geom.size());
    }
    overlay.occupation = bits;
    overlay.gauge = encode(bits, geom, false);
    run.note("overlay", {{"label", config.overlay}, {"bitstring", format_bitstring(bits, geom.size())}});
  }
  run.write("lattice.svg", svg::lattice(geom, overlay));
  const HardwareReport hw = validate_hardware_envelope(geom);
  run.note("hardware", {{"ok", hw.ok()}, {"summary", hw.summary()}});
  run.finish();
}

void cmd_scan_phase(const RunConfig& config, const Progress& progress) {
  if (config.phase.rb_grid.empty()) throw ConfigError("config has no scan_phase block");
  Run run(config, "scan-phase");
  const auto basis = make_basis(config, run);
  const StringSet strings = enumerate_strings(*config.geometry);
  const FilterRegion region = aggressive_filter(strings);
  PhaseScanOptions o;
  o.rb_grid = config.phase.rb_grid;
  o.delta_grid = config.phase.delta_grid;
  o.method = config.phase.method;
  o.omega = config.physics.omega;
  o.cutoff = config.physics.cutoff;
  o.timing = config.timing;
  o.evolve = evolve_options(config);
  o.shots = config.phase.shots;
  o.seed = config.seed;
  o.threads = config.threads;
  ScanCache cache(config.output, config.fingerprint());
  if (progress && cache.cached() > 0) progress("resuming with " + std::to_string(cache.cached()) + " cached points");
  const ScanResult scan =
      scan_phase_diagram(basis, strings, region, o, cache.hooks(o.rb_grid.size() * o.delta_grid.size(), progress));
  run.write("phase.csv", csv(scan));
  run.write("heatmap_p_s.svg", svg::heatmap(scan, "p_s", "string probability p_s"));
  run.write("heatmap_p_b.svg", svg::heatmap(scan, "broken_b", "broken-string probability p_b"));
  run.finish();
}

void cmd_quench(const RunConfig& config, const Progress& progress) {
  if (config.quench.delta0.empty()) throw ConfigError("config has no quench block");
  Run run(config, "quench");
  const auto basis = make_basis(config, run);
  const StringSet strings = enumerate_strings(*config.geometry);
  const FilterRegion region = aggressive_filter(strings);
  const RydbergOperator op = make_operator(config, basis);
  const QuantumState psi0 = initial_state(config, op, config.quench.initial);
  const std::vector<double> pattern = ground_atom_pattern(strings.get("broken_b").bits, basis->atom_count());

  std::vector<double> samples = config.quench.times;
  samples.insert(samples.end(), config.quench.snapshot_times.begin(), config.quench.snapshot_times.end());
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());
  const auto wanted = [](const std::vector<double>& grid, double t) {
    return std::binary_search(grid.begin(), grid.end(), t);
  };

  json snapshots = json::array();
  EvolveOptions evolve = evolve_options(config);
  evolve.keep_states = false;
  for (std::size_t q = 0; q < config.quench.delta0.size(); ++q) {
    const double ratio = config.quench.delta0[q];
    const double omega = config.physics.omega;
    const DriveSample drive{omega, config.physics.delta_over_omega * omega, 0.0, ratio * omega};
    std::vector<std::vector<ProbabilityRow>> rows;
    quench(psi0, op, drive, pattern, samples, evolve, [&](double t, const QuantumState& psi) {
      if (wanted(config.quench.times, t)) rows.push_back(exact_rows(psi, strings, region));
      if (wanted(config.quench.snapshot_times, t)) {
        snapshots.push_back({{"delta0_over_omega", ratio}, {"t_us", t}, {"occupation", occupations(psi)}});
      }
    });

    std::ostringstream out;
    out << "t_us";
    for (const auto& r : rows.front()) out << ',' << r.label;
    out << "\n";
    for (std::size_t k = 0; k < rows.size(); ++k) {
      out << io::format_double(config.quench.times[k]);
      for (const auto& r : rows[k]) out << ',' << io::format_double(r.p);
      out << "\n";
    }
    const std::string stem = "quench_" + std::to_string(q);
    run.write(stem + ".csv", out.str());

    std::vector<svg::Series> series;
    for (std::size_t c = 0; c < rows.front().size(); ++c) {
      if (!plotted(rows.front()[c].label)) continue;
      svg::Series s{rows.front()[c].label, {}};
      for (const auto& r : rows) s.y.push_back(r[c].p);
      series.push_back(std::move(s));
    }
    run.write(stem + ".svg",
              svg::line_plot(config.quench.times, series, "t (us)", "quench at delta_0/Omega = " + io::format_double(ratio)));
    if (progress) progress("quench " + std::to_string(q + 1) + "/" + std::to_string(config.quench.delta0.size()));
  }
  if (!config.quench.snapshot_times.empty()) run.write("occupations.json", snapshots.dump(2) + "\n");
  json initial = json::object();
  for (const auto& row : exact_rows(psi0, strings, region)) initial[row.label] = row.p;
  run.note("initial", initial);
  run.finish();
}

void cmd_scan_resonance(const RunConfig& config, const Progress& progress) {
  if (config.resonance.delta0_grid.empty()) throw ConfigError("config has no scan_resonance block");
  Run run(config, "scan-resonance");
  const auto basis = make_basis(config, run);
  const StringSet strings = enumerate_strings(*config.geometry);
  const FilterRegion region = aggressive_filter(strings);
  ResonanceScanOptions o;
  o.rb = config.physics.rb;
  o.delta_over_omega = config.physics.delta_over_omega;
  o.delta0_grid = config.resonance.delta0_grid;
  o.t_probe = config.resonance.t_probe;
  o.initial = config.resonance.initial;
  o.omega = config.physics.omega;
  o.cutoff = config.physics.cutoff;
  o.timing = preparation_timing(config);
  o.evolve = evolve_options(config);
  o.fit_points = config.resonance.fit_points;
  o.shots = config.resonance.shots;
  o.seed = config.seed;
  o.threads = config.threads;
  ScanCache cache(config.output, config.fingerprint());
  const ResonanceResult r =
      scan_resonance(basis, strings, region, o, cache.hooks(o.delta0_grid.size(), progress));
  run.write("resonance.csv", csv(r.scan));
  json initial = json::object();
  for (const auto& row : r.initial_rows) initial[row.label] = row.p;
  const json summary = {{"fit", io::fit_to_json(r.fit)},
                        {"classical_crossing_formula", r.crossing_formula},
                        {"classical_crossing_exact", r.crossing_exact},
                        {"string_length", strings.distance()},
                        {"initial", initial}};
  run.write("fit.json", summary.dump(2) + "\n");
  std::vector<svg::Series> series;
  for (const char* label : {"p_s", "broken_b", "charges_c"}) {
    if (std::any_of(r.initial_rows.begin(), r.initial_rows.end(), [&](const auto& x) { return x.label == label; })) {
      series.push_back({label, rydlgt::series(r.scan, label)});
    }
  }
  run.write("resonance.svg", svg::line_plot(r.scan.x, series, "delta_0 / Omega",
                                            "probabilities at t = " + io::format_double(o.t_probe) + " us",
                                            {{r.crossing_formula, "classical crossing"}}));
  run.finish();
}

void cmd_shots(const RunConfig& config, const Progress&) {
  if (!config.shots.file && config.shots.simulate == 0) {
    throw ConfigError("shots block needs either \"file\" or \"simulate\"");
  }
  Run run(config, "shots");
  const Geometry& geom = *config.geometry;
  const StringSet strings = enumerate_strings(geom);
  ShotSet shots;
  std::optional<QuantumState> psi;
  if (config.shots.file) {
    std::ifstream in(*config.shots.file);
    if (!in) throw ConfigError("cannot open shot file " + config.shots.file->string());
    shots = io::read_shots(in, geom.size());
    run.note("shots_source", config.shots.file->string());
  } else {
    const auto basis = make_basis(config, run);
    const RydbergOperator op = make_operator(config, basis);
    psi = initial_state(config, op, InitialState::GroundState);
    shots = sample_shots(*psi, config.shots.simulate, config.seed);
    if (config.shots.detection_errors) {
      shots = apply_detection_errors(shots, config.noise.detection, derive_seed(config.seed, 1));
    }
    shots.geometry_file = config.geometry_source;
    std::ostringstream out;
    io::write_shots(out, shots);
    run.write("shots.txt", out.str());
  }
  run.note("shot_count", shots.shots.size());
  for (const auto& name : config.shots.filters) {
    const FilterRegion region =
        name == "aggressive" ? aggressive_filter(strings) : conservative_filter(strings, geom, config.shots.margin);
    std::ostringstream out;
    io::write_probability_csv(out, shot_rows(shots, strings, region));
    run.write("probabilities_" + name + ".csv", out.str());
    if (psi && !config.shots.detection_errors) {
      std::ostringstream exact;
      io::write_probability_csv(exact, exact_rows(*psi, strings, region));
      run.write("exact_" + name + ".csv", exact.str());
    }
  }
  run.finish();
}

}  // namespace rydlgt::cli
