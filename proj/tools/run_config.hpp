#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydlgt/dynamics.hpp"
#include "rydlgt/geometry.hpp"
#include "rydlgt/hilbert.hpp"
#include "rydlgt/noise.hpp"
#include "rydlgt/scan.hpp"

namespace rydlgt::cli {

using nlohmann::json;

// Reduced units: Omega is the hardware peak, lengths are in a, detunings in
// Omega. Physical units: MHz (value / 2pi) and um. Times are always in us.
enum class UnitSystem { Reduced, Physical };

struct PhysicsConfig {
  double omega = 0.0;  // rad/us
  double rb = 1.2;     // units of a
  double delta_over_omega = 2.3;
  double cutoff = kDefaultCutoff;
};

struct PhaseConfig {
  std::vector<double> rb_grid;
  std::vector<double> delta_grid;  // delta / Omega
  PhaseMethod method = PhaseMethod::GroundState;
  std::size_t shots = 0;
};

struct ResonanceConfig {
  std::vector<double> delta0_grid;  // delta_0 / Omega
  double t_probe = 0.4;
  InitialState initial = InitialState::Sweep;
  std::size_t fit_points = 0;
  std::size_t shots = 0;
};

struct QuenchConfig {
  std::vector<double> delta0;  // delta_0 / Omega, one run each
  std::vector<double> times;
  std::vector<double> snapshot_times;
  InitialState initial = InitialState::Sweep;
};

struct ShotsConfig {
  std::optional<std::filesystem::path> file;
  std::size_t simulate = 0;  // shots drawn from the ground state when no file
  bool detection_errors = false;
  std::vector<std::string> filters{"aggressive", "conservative"};
  double margin = 1.0;
};

/// A validated run description. `raw` is the config file as read.
struct RunConfig {
  json raw;
  UnitSystem units = UnitSystem::Reduced;
  std::shared_ptr<const Geometry> geometry;
  std::string geometry_source;  // file path or "inline"
  PhysicsConfig physics;
  BasisMode basis = BasisMode::Blockaded;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::filesystem::path output = "out";
  double budget_s = 0.0;  // 0: none
  SweepTiming timing;
  double dt = 0.0;
  NoiseModel noise;
  std::string overlay;  // configuration label or bitstring for the lattice sketch
  PhaseConfig phase;
  ResonanceConfig resonance;
  QuenchConfig quench;
  ShotsConfig shots;

  /// Settings that determine numerical results (everything except threads,
  /// output directory and budget), used to validate resume caches.
  json fingerprint() const;
};

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> output;
  std::optional<BasisMode> basis;
};

/// Parses and validates everything up front. Relative file paths resolve
/// against `base_dir`. Throws ConfigError.
RunConfig parse_run_config(const json& raw, const Overrides& overrides = {},
                           const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& file, const Overrides& overrides = {});

}  // namespace rydlgt::cli
