#pragma once

#include <functional>
#include <string>

#include "run_config.hpp"

namespace rydlgt::cli {

/// Side-channel progress sink; never influences outputs.
using Progress = std::function<void(const std::string&)>;

// Each command writes its artifacts and manifest.json into config.output.

/// geometry.json and lattice.svg, with an optional gauge overlay.
void cmd_geometry(const RunConfig& config, const Progress& progress = {});
/// phase.csv plus heatmaps of p_s and p_b. Resumable through cache.jsonl.
void cmd_scan_phase(const RunConfig& config, const Progress& progress = {});
/// One time-series CSV and line plot per delta_0, plus occupation snapshots.
void cmd_quench(const RunConfig& config, const Progress& progress = {});
/// resonance.csv, fit.json and a line plot with the classical crossing.
/// Resumable through cache.jsonl.
void cmd_scan_resonance(const RunConfig& config, const Progress& progress = {});
/// Probability tables with Clopper-Pearson intervals, one per filter.
void cmd_shots(const RunConfig& config, const Progress& progress = {});

}  // namespace rydlgt::cli
