#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "rydlgt/geometry.hpp"
#include "rydlgt/gaussian_fit.hpp"
#include "rydlgt/lgt.hpp"
#include "rydlgt/scan.hpp"
#include "rydlgt/schedule.hpp"
#include "rydlgt/stats.hpp"

namespace rydlgt::io {

using nlohmann::json;

/// Lattice spec, defect sites and the atom list.
json geometry_to_json(const Geometry& geom);
/// Rebuilds from spec and defects; an atom list, if present, must match.
Geometry geometry_from_json(const json& j);

/// Channels as [t_us, value_MHz/2pi] pairs (phi in rad) plus the pattern.
json schedule_to_json(const DriveSchedule& s);
DriveSchedule schedule_from_json(const json& j);

json gauge_to_json(const GaugeConfig& cfg, const Geometry& geom);
json fit_to_json(const GaussianFit& fit);

/// `# geometry: <file>`, `# seed: <u64>`, then one bitstring per line.
void write_shots(std::ostream& out, const ShotSet& shots);
/// Throws ConfigError naming the offending line number.
ShotSet read_shots(std::istream& in, std::size_t atom_count);

/// label,k,n,p,ci_low,ci_high
void write_probability_csv(std::ostream& out, const std::vector<ProbabilityRow>& rows);

/// One row per grid point: axes, energy, then p of every label.
void write_scan_csv(std::ostream& out, const ScanResult& scan);

/// Cache line for resumable scans; doubles round-trip exactly.
std::string point_to_line(const ScanPoint& p);
ScanPoint point_from_line(const std::string& line);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace rydlgt::io
