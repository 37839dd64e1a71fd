#pragma once

#include <string>
#include <vector>

#include "rydlgt/geometry.hpp"
#include "rydlgt/hilbert.hpp"

namespace rydlgt {

// Sign convention: (-1)^{s_l} S^z_l = 1/2 - n_l on every link, so the vacuum
// (all S^z = -1/2) has every intra-cell atom excited. Links missing from the
// patch, including those removed for a defect, count as n = 0 in Gauss's law.

/// Electric fields and charges decoded from a bitstring.
struct GaugeConfig {
  std::vector<double> sz;           // per present atom
  std::vector<int> charge;          // dynamical Q_x per vertex
  std::vector<double> background;   // (-1)^{s_x} / 2 per vertex
  std::vector<int> static_charge;   // +-1 on defect vertices, 0 elsewhere
  bool hardcore = true;             // every Q_x in {0,1} on A and {-1,0} on B
};

/// Throws ConfigError for a blockade-violating bitstring when strict.
GaugeConfig encode(Bitstring s, const Geometry& geom, bool strict = true);
Bitstring decode(const GaugeConfig& cfg, const Geometry& geom);

/// sum_{l at x} S^z_l (-1)^{s_l} (-1)^{s_x} with absent links frozen.
double divergence(const GaugeConfig& cfg, const Geometry& geom, int vertex);

/// G_x - q_x per vertex, G_x = div_x S^z - Q_x, q_x = background + static.
std::vector<double> gauss_residual(const GaugeConfig& cfg, const Geometry& geom);

/// Every intra-cell atom excited. Bitstring-valued functions here throw
/// CapacityError for geometries wider than kMaxAtoms.
Bitstring vacuum_bitstring(const Geometry& geom);

enum class ConfigKind { String, Intermediate, Broken, Charges, Violation };

struct NamedConfig {
  std::string label;
  ConfigKind kind = ConfigKind::String;
  Bitstring bits = 0;
};

/// Canonical configurations between two opposite static charges.
struct StringSet {
  int d0 = 0;  // cell displacement from the + to the - charge
  int d1 = 0;
  std::vector<NamedConfig> configs;
  /// Atoms the configs are compared on. For a straight string this is the
  /// string itself in path order; otherwise the atoms of the plaquettes
  /// spanned by the charges.
  std::vector<int> region;

  bool straight() const { return d0 == 0 || d1 == 0; }
  int distance() const { return d0 + d1; }
  const NamedConfig& get(const std::string& label) const;
  std::vector<NamedConfig> of_kind(ConfigKind kind) const;
};

/// Minimal strings, broken string b and, for straight geometries, the charge
/// state c, single-pair intermediates and the three violation patterns.
/// Requires exactly one A and one B defect with the B defect at a
/// non-negative cell offset from the A defect.
StringSet enumerate_strings(const Geometry& geom);

/// sigma_0 = V(sqrt 3) - V(2) with V = omega rb^6 / r^6 truncated at cutoff.
double string_tension(double rb, double omega, double cutoff = kDefaultCutoff);

/// 2m = delta - 6 (rb/2)^6 omega.
double renormalized_mass(double delta, double rb, double omega);

/// delta_0* solving 2m = (sigma_0 + delta_0*) d.
double classical_crossing(int d, double delta, double rb, double omega, double cutoff = kDefaultCutoff);

/// delta_0* at which the diagonal energies of the first string and b cross
/// when delta_0 acts on the ground atoms of b.
double classical_crossing_exact(const StringSet& strings, const CouplingTable& couplings, double delta);

}  // namespace rydlgt
