#include "run_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "rydlgt/error.hpp"
#include "rydlgt/io.hpp"
#include "rydlgt/units.hpp"

namespace rydlgt::cli {

namespace {

const std::set<std::string> kReducedKeys = {"rb", "delta_over_omega", "rb_grid", "delta_grid", "delta0_grid",
                                            "delta0_over_omega"};
const std::set<std::string> kPhysicalKeys = {"omega_mhz",  "c6_mhz_um6",     "a_um",            "delta_mhz",
                                             "a_um_grid", "delta_mhz_grid", "delta0_mhz_grid", "delta0_mhz"};

// Rejects keys outside `allowed` and keys of the other unit system.
void check_keys(const json& block, const std::string& where, const std::set<std::string>& allowed, UnitSystem units) {
  if (!block.is_object()) throw ConfigError(where + " must be a JSON object");
  const auto& foreign = units == UnitSystem::Reduced ? kPhysicalKeys : kReducedKeys;
  for (const auto& [key, value] : block.items()) {
    if (foreign.contains(key)) {
      throw ConfigError(where + "." + key + " belongs to " +
                        (units == UnitSystem::Reduced ? "physical" : "reduced") + " units but the config declares " +
                        (units == UnitSystem::Reduced ? "reduced" : "physical") + " units; mixing is not allowed");
    }
    if (!allowed.contains(key)) throw ConfigError("unknown key " + where + "." + key);
  }
}

double number(const json& block, const std::string& where, const std::string& key) {
  const auto it = block.find(key);
  if (it == block.end()) throw ConfigError(where + "." + key + " is required");
  if (!it->is_number()) throw ConfigError(where + "." + key + " must be a number");
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ConfigError(where + "." + key + " must be finite");
  return v;
}

double number_or(const json& block, const std::string& where, const std::string& key, double fallback) {
  return block.contains(key) ? number(block, where, key) : fallback;
}

double positive(const json& block, const std::string& where, const std::string& key) {
  const double v = number(block, where, key);
  if (!(v > 0.0)) throw ConfigError(where + "." + key + " must be positive");
  return v;
}

std::size_t count_or(const json& block, const std::string& where, const std::string& key, std::size_t fallback) {
  if (!block.contains(key)) return fallback;
  const json& v = block.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

std::vector<double> numbers(const json& block, const std::string& where, const std::string& key) {
  const auto it = block.find(key);
  if (it == block.end()) throw ConfigError(where + "." + key + " is required");
  if (!it->is_array()) throw ConfigError(where + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : *it) {
    if (!v.is_number() || !std::isfinite(v.get<double>())) {
      throw ConfigError(where + "." + key + " must contain only finite numbers");
    }
    out.push_back(v.get<double>());
  }
  if (out.empty()) throw ConfigError(where + "." + key + " is empty");
  return out;
}

// A time grid is either an explicit list or {"stop": t, "step": dt} from 0.
std::vector<double> time_grid(const json& block, const std::string& where, const std::string& key) {
  const auto it = block.find(key);
  if (it == block.end()) throw ConfigError(where + "." + key + " is required");
  std::vector<double> t;
  if (it->is_object()) {
    check_keys(*it, where + "." + key, {"stop", "step"}, UnitSystem::Reduced);
    const double stop = positive(*it, where + "." + key, "stop");
    const double step = positive(*it, where + "." + key, "step");
    const auto n = static_cast<std::size_t>(std::floor(stop / step + 1e-9));
    for (std::size_t k = 0; k <= n; ++k) t.push_back(static_cast<double>(k) * step);
  } else {
    t = numbers(block, where, key);
  }
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < 0.0) throw ConfigError(where + "." + key + " holds a negative time");
    if (k > 0 && !(t[k] > t[k - 1])) throw ConfigError(where + "." + key + " must be strictly increasing");
  }
  return t;
}

std::string text(const json& block, const std::string& where, const std::string& key, const std::string& fallback) {
  if (!block.contains(key)) return fallback;
  if (!block.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return block.at(key).get<std::string>();
}

InitialState parse_initial(const std::string& s, const std::string& where) {
  if (s == "sweep") return InitialState::Sweep;
  if (s == "ground_state") return InitialState::GroundState;
  throw ConfigError(where + ".initial must be \"sweep\" or \"ground_state\", got \"" + s + "\"");
}

// Blockade radius in um from C6 / 2pi (MHz um^6) and Omega / 2pi (MHz).
double blockade_radius_um(double c6_mhz_um6, double omega_mhz) { return std::pow(c6_mhz_um6 / omega_mhz, 1.0 / 6.0); }

std::vector<double> sorted_unique(std::vector<double> v, const std::string& where) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw ConfigError(where + " holds duplicate values");
  return v;
}

struct PhysicalScale {
  double omega_mhz = units::kOmegaMaxMHz;
  double c6 = units::kC6MHzUm6;
  double a_um = 1.0;
};

}  // namespace

json RunConfig::fingerprint() const {
  json j = raw;
  j.erase("threads");
  j.erase("output");
  j.erase("budget_s");
  j["seed"] = seed;
  j["basis"] = to_string(basis);
  return j;
}

RunConfig parse_run_config(const json& raw, const Overrides& overrides, const std::filesystem::path& base_dir) {
  if (!raw.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  cfg.raw = raw;

  const std::string unit_name = text(raw, "config", "units", "reduced");
  if (unit_name == "reduced") {
    cfg.units = UnitSystem::Reduced;
  } else if (unit_name == "physical") {
    cfg.units = UnitSystem::Physical;
  } else {
    throw ConfigError("config.units must be \"reduced\" or \"physical\", got \"" + unit_name + "\"");
  }
  const UnitSystem units = cfg.units;
  check_keys(raw, "config",
             {"units", "geometry", "geometry_file", "physics", "basis", "seed", "threads", "output", "budget_s",
              "sweep", "dt_us", "noise", "overlay", "scan_phase", "scan_resonance", "quench", "shots"},
             units);

  // Physics first: physical units fix the lattice spacing of the geometry.
  PhysicalScale scale;
  const json physics = raw.value("physics", json::object());
  if (units == UnitSystem::Reduced) {
    check_keys(physics, "physics", {"rb", "delta_over_omega", "cutoff"}, units);
    cfg.physics.omega = units::kOmegaMax;
    cfg.physics.rb = physics.contains("rb") ? positive(physics, "physics", "rb") : 1.2;
    cfg.physics.delta_over_omega = number_or(physics, "physics", "delta_over_omega", 2.3);
  } else {
    check_keys(physics, "physics", {"omega_mhz", "c6_mhz_um6", "a_um", "delta_mhz", "cutoff"}, units);
    scale.omega_mhz = positive(physics, "physics", "omega_mhz");
    scale.c6 = physics.contains("c6_mhz_um6") ? positive(physics, "physics", "c6_mhz_um6") : units::kC6MHzUm6;
    scale.a_um = positive(physics, "physics", "a_um");
    cfg.physics.omega = units::from_mhz(scale.omega_mhz);
    cfg.physics.rb = blockade_radius_um(scale.c6, scale.omega_mhz) / scale.a_um;
    cfg.physics.delta_over_omega = number(physics, "physics", "delta_mhz") / scale.omega_mhz;
  }
  cfg.physics.cutoff = number_or(physics, "physics", "cutoff", kDefaultCutoff);
  if (cfg.physics.cutoff < 0.0) throw ConfigError("physics.cutoff must be non-negative (0 keeps every pair)");

  // Geometry: inline lattice description or a file written by `geometry`.
  if (raw.contains("geometry") == raw.contains("geometry_file")) {
    throw ConfigError("config needs exactly one of \"geometry\" and \"geometry_file\"");
  }
  json gj;
  if (raw.contains("geometry_file")) {
    const std::filesystem::path p = base_dir / text(raw, "config", "geometry_file", "");
    gj = io::read_json_file(p);
    cfg.geometry_source = p.string();
  } else {
    gj = raw.at("geometry");
    cfg.geometry_source = "inline";
  }
  if (!gj.is_object() || !gj.contains("spec")) throw ConfigError("geometry needs a \"spec\" object");
  if (units == UnitSystem::Physical) gj["spec"]["a_um"] = scale.a_um;
  cfg.geometry = std::make_shared<const Geometry>(io::geometry_from_json(gj));

  cfg.basis = parse_basis_mode(text(raw, "config", "basis", "blockaded"));
  if (raw.contains("seed")) {
    if (!raw.at("seed").is_number_unsigned()) throw ConfigError("config.seed must be a non-negative integer");
    cfg.seed = raw.at("seed").get<std::uint64_t>();
  }
  cfg.threads = static_cast<unsigned>(count_or(raw, "config", "threads", 1));
  cfg.output = text(raw, "config", "output", "out");
  cfg.budget_s = number_or(raw, "config", "budget_s", 0.0);
  if (cfg.budget_s < 0.0) throw ConfigError("config.budget_s must be non-negative");
  cfg.dt = number_or(raw, "config", "dt_us", 0.0);
  if (cfg.dt < 0.0) throw ConfigError("config.dt_us must be non-negative");
  cfg.overlay = text(raw, "config", "overlay", "");

  if (raw.contains("sweep")) {
    const json& s = raw.at("sweep");
    check_keys(s, "sweep", {"ramp_us", "sweep_us", "delta_start_over_omega", "ramp_down"}, units);
    cfg.timing.ramp = s.contains("ramp_us") ? positive(s, "sweep", "ramp_us") : cfg.timing.ramp;
    cfg.timing.sweep = s.contains("sweep_us") ? positive(s, "sweep", "sweep_us") : cfg.timing.sweep;
    cfg.timing.delta_start_over_omega = number_or(s, "sweep", "delta_start_over_omega", cfg.timing.delta_start_over_omega);
    if (s.contains("ramp_down")) {
      if (!s.at("ramp_down").is_boolean()) throw ConfigError("sweep.ramp_down must be a boolean");
      cfg.timing.ramp_down = s.at("ramp_down").get<bool>();
    }
  }

  if (raw.contains("noise")) {
    const json& n = raw.at("noise");
    check_keys(n, "noise", {"sigma_thermal_um", "sigma_static_um", "p_r", "p_g"}, units);
    cfg.noise.sigma_thermal_um = number_or(n, "noise", "sigma_thermal_um", cfg.noise.sigma_thermal_um);
    cfg.noise.sigma_static_um = number_or(n, "noise", "sigma_static_um", cfg.noise.sigma_static_um);
    cfg.noise.detection.p_r = number_or(n, "noise", "p_r", cfg.noise.detection.p_r);
    cfg.noise.detection.p_g = number_or(n, "noise", "p_g", cfg.noise.detection.p_g);
  }
  cfg.noise.validate();

  const double rb_um = blockade_radius_um(scale.c6, scale.omega_mhz);
  if (raw.contains("scan_phase")) {
    const json& s = raw.at("scan_phase");
    check_keys(s, "scan_phase", {"rb_grid", "delta_grid", "a_um_grid", "delta_mhz_grid", "method", "shots"}, units);
    if (units == UnitSystem::Reduced) {
      cfg.phase.rb_grid = numbers(s, "scan_phase", "rb_grid");
      cfg.phase.delta_grid = numbers(s, "scan_phase", "delta_grid");
    } else {
      std::vector<double> rb;
      for (double a : numbers(s, "scan_phase", "a_um_grid")) {
        if (!(a > 0.0)) throw ConfigError("scan_phase.a_um_grid must be positive");
        rb.push_back(rb_um / a);
      }
      cfg.phase.rb_grid = sorted_unique(rb, "scan_phase.a_um_grid");
      std::vector<double> d;
      for (double v : numbers(s, "scan_phase", "delta_mhz_grid")) d.push_back(v / scale.omega_mhz);
      cfg.phase.delta_grid = sorted_unique(d, "scan_phase.delta_mhz_grid");
    }
    const std::string method = text(s, "scan_phase", "method", "ground_state");
    if (method == "ground_state") {
      cfg.phase.method = PhaseMethod::GroundState;
    } else if (method == "sweep") {
      cfg.phase.method = PhaseMethod::Sweep;
    } else {
      throw ConfigError("scan_phase.method must be \"ground_state\" or \"sweep\", got \"" + method + "\"");
    }
    cfg.phase.shots = count_or(s, "scan_phase", "shots", 0);
  }

  if (raw.contains("scan_resonance")) {
    const json& s = raw.at("scan_resonance");
    check_keys(s, "scan_resonance", {"delta0_grid", "delta0_mhz_grid", "t_probe_us", "initial", "fit_points", "shots"},
               units);
    if (units == UnitSystem::Reduced) {
      cfg.resonance.delta0_grid = numbers(s, "scan_resonance", "delta0_grid");
    } else {
      for (double v : numbers(s, "scan_resonance", "delta0_mhz_grid")) {
        cfg.resonance.delta0_grid.push_back(v / scale.omega_mhz);
      }
    }
    cfg.resonance.t_probe = s.contains("t_probe_us") ? positive(s, "scan_resonance", "t_probe_us") : 0.4;
    cfg.resonance.initial = parse_initial(text(s, "scan_resonance", "initial", "sweep"), "scan_resonance");
    cfg.resonance.fit_points = count_or(s, "scan_resonance", "fit_points", 0);
    cfg.resonance.shots = count_or(s, "scan_resonance", "shots", 0);
  }

  if (raw.contains("quench")) {
    const json& s = raw.at("quench");
    check_keys(s, "quench", {"delta0_over_omega", "delta0_mhz", "times_us", "snapshot_times_us", "initial"}, units);
    if (units == UnitSystem::Reduced) {
      cfg.quench.delta0 = numbers(s, "quench", "delta0_over_omega");
    } else {
      for (double v : numbers(s, "quench", "delta0_mhz")) cfg.quench.delta0.push_back(v / scale.omega_mhz);
    }
    cfg.quench.times = time_grid(s, "quench", "times_us");
    if (s.contains("snapshot_times_us")) cfg.quench.snapshot_times = time_grid(s, "quench", "snapshot_times_us");
    cfg.quench.initial = parse_initial(text(s, "quench", "initial", "sweep"), "quench");
  }

  if (raw.contains("shots")) {
    const json& s = raw.at("shots");
    check_keys(s, "shots", {"file", "simulate", "detection_errors", "filters", "margin"}, units);
    if (s.contains("file")) cfg.shots.file = base_dir / text(s, "shots", "file", "");
    cfg.shots.simulate = count_or(s, "shots", "simulate", 0);
    if (cfg.shots.file && cfg.shots.simulate > 0) {
      throw ConfigError("shots.file and shots.simulate are mutually exclusive");
    }
    if (s.contains("detection_errors")) {
      if (!s.at("detection_errors").is_boolean()) throw ConfigError("shots.detection_errors must be a boolean");
      cfg.shots.detection_errors = s.at("detection_errors").get<bool>();
    }
    if (s.contains("filters")) {
      cfg.shots.filters.clear();
      for (const auto& f : s.at("filters")) {
        if (!f.is_string() || (f != "aggressive" && f != "conservative")) {
          throw ConfigError("shots.filters entries must be \"aggressive\" or \"conservative\"");
        }
        cfg.shots.filters.push_back(f.get<std::string>());
      }
      if (cfg.shots.filters.empty()) throw ConfigError("shots.filters is empty");
    }
    cfg.shots.margin = number_or(s, "shots", "margin", 1.0);
    if (cfg.shots.margin < 0.0) throw ConfigError("shots.margin must be non-negative");
  }

  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) cfg.threads = *overrides.threads;
  if (overrides.output) cfg.output = *overrides.output;
  if (overrides.basis) cfg.basis = *overrides.basis;
  if (cfg.threads == 0) throw ConfigError("thread count must be at least 1");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file, const Overrides& overrides) {
  return parse_run_config(io::read_json_file(file), overrides, file.parent_path());
}

}  // namespace rydlgt::cli
