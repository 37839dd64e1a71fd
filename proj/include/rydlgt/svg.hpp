#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rydlgt/geometry.hpp"
#include "rydlgt/hilbert.hpp"
#include "rydlgt/lgt.hpp"
#include "rydlgt/scan.hpp"

namespace rydlgt::svg {

struct LatticeOverlay {
  std::optional<Bitstring> occupation;  // filled circles for excited atoms
  std::optional<GaugeConfig> gauge;     // S^z = +1/2 links and nonzero Q
};

/// Honeycomb links, atoms, removed atoms (dashed) and static charges.
std::string lattice(const Geometry& geom, const LatticeOverlay& overlay = {});

/// Colour map of one label over a 2D scan.
std::string heatmap(const ScanResult& scan, const std::string& label, const std::string& title);

struct Series {
  std::string name;
  std::vector<double> y;
};

/// Line plot on shared x values, with optional vertical markers.
std::string line_plot(const std::vector<double>& x, const std::vector<Series>& series, const std::string& x_label,
                      const std::string& title, const std::vector<std::pair<double, std::string>>& markers = {});

}  // namespace rydlgt::svg
