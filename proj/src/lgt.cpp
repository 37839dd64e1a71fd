#include "rydlgt/lgt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "rydlgt/error.hpp"
#include "rydlgt/hamiltonian.hpp"

namespace rydlgt {

namespace {

void require_bitstring_width(const Geometry& geom) {
  if (geom.size() > kMaxAtoms) {
    throw CapacityError("geometry has " + std::to_string(geom.size()) + " atoms, bitstrings hold at most " +
                        std::to_string(kMaxAtoms));
  }
}

}  // namespace

GaugeConfig encode(Bitstring s, const Geometry& geom, bool strict) {
  require_bitstring_width(geom);
  if (strict && !satisfies_blockade(s, geom)) {
    throw ConfigError("bitstring " + format_bitstring(s, geom.size()) + " violates the blockade constraint");
  }
  GaugeConfig cfg;
  cfg.sz.resize(geom.size());
  for (std::size_t k = 0; k < geom.size(); ++k) {
    const double flat = 0.5 - (bit(s, static_cast<int>(k)) ? 1.0 : 0.0);
    cfg.sz[k] = geom.atoms()[k].parity() == 0 ? flat : -flat;
  }
  const auto& vertices = geom.vertices();
  cfg.charge.resize(vertices.size());
  cfg.background.resize(vertices.size());
  cfg.static_charge.resize(vertices.size());
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const int sign = vertices[v].sign();
    cfg.background[v] = 0.5 * sign;
    if (const auto q = geom.defect_charge(vertices[v])) {
      cfg.static_charge[v] = *q;
      cfg.charge[v] = 0;
      continue;
    }
    int excited = 0;
    for (int k : geom.vertex_atoms(static_cast<int>(v))) excited += bit(s, k) ? 1 : 0;
    cfg.charge[v] = sign * (1 - excited);
    const int occupation = sign > 0 ? cfg.charge[v] : cfg.charge[v] + 1;
    if (occupation < 0 || occupation > 1) cfg.hardcore = false;
  }
  return cfg;
}

Bitstring decode(const GaugeConfig& cfg, const Geometry& geom) {
  if (cfg.sz.size() != geom.size()) throw ConfigError("gauge config does not match the geometry");
  require_bitstring_width(geom);
  Bitstring s = 0;
  for (std::size_t k = 0; k < geom.size(); ++k) {
    const double flat = geom.atoms()[k].parity() == 0 ? cfg.sz[k] : -cfg.sz[k];
    if (flat < 0.0) s |= Bitstring{1} << k;
  }
  return s;
}

double divergence(const GaugeConfig& cfg, const Geometry& geom, int vertex) {
  const auto& atoms = geom.vertex_atoms(vertex);
  double sum = 0.5 * static_cast<double>(3 - static_cast<int>(atoms.size()));
  for (int k : atoms) sum += geom.atoms()[k].parity() == 0 ? cfg.sz[k] : -cfg.sz[k];
  return geom.vertices()[vertex].sign() * sum;
}

std::vector<double> gauss_residual(const GaugeConfig& cfg, const Geometry& geom) {
  std::vector<double> r(geom.vertices().size());
  for (std::size_t v = 0; v < r.size(); ++v) {
    const double g = divergence(cfg, geom, static_cast<int>(v)) - cfg.charge[v];
    r[v] = g - cfg.background[v] - cfg.static_charge[v];
  }
  return r;
}

Bitstring vacuum_bitstring(const Geometry& geom) {
  require_bitstring_width(geom);
  Bitstring s = 0;
  for (std::size_t k = 0; k < geom.size(); ++k) {
    if (geom.atoms()[k].kind == LinkKind::Intra) s |= Bitstring{1} << k;
  }
  return s;
}

const NamedConfig& StringSet::get(const std::string& label) const {
  for (const auto& c : configs) {
    if (c.label == label) return c;
  }
  throw ConfigError("no configuration labelled '" + label + "'");
}

std::vector<NamedConfig> StringSet::of_kind(ConfigKind kind) const {
  std::vector<NamedConfig> out;
  for (const auto& c : configs) {
    if (c.kind == kind) out.push_back(c);
  }
  return out;
}

namespace {

Bitstring mask_of(const std::vector<int>& atoms) {
  Bitstring m = 0;
  for (int k : atoms) m |= Bitstring{1} << k;
  return m;
}

// Present atoms on the path A(start) -> ... -> B(end) following `moves`
// (0: axis 0, 1: axis 1). Empty if a link of the path is missing.
std::optional<std::vector<int>> path_atoms(const Geometry& geom, Cell start, const std::vector<int>& moves) {
  std::vector<int> atoms;
  Cell c = start;
  for (int m : moves) {
    const Cell next = m == 0 ? Cell{c.i + 1, c.j} : Cell{c.i, c.j + 1};
    if (c != start) {
      const auto intra = geom.atom_between({c, Sublattice::A}, {c, Sublattice::B});
      if (!intra) return std::nullopt;
      atoms.push_back(*intra);
    }
    const auto inter = geom.atom_between({c, Sublattice::B}, {next, Sublattice::A});
    if (!inter) return std::nullopt;
    atoms.push_back(*inter);
    c = next;
  }
  return atoms;
}

}  // namespace

StringSet enumerate_strings(const Geometry& geom) {
  const auto& defects = geom.defects();
  if (defects.size() != 2) {
    throw ConfigError("string enumeration needs exactly two charges, found " + std::to_string(defects.size()));
  }
  const auto plus = std::find_if(defects.begin(), defects.end(), [](const ChargeDefect& d) { return d.sign > 0; });
  const auto minus = std::find_if(defects.begin(), defects.end(), [](const ChargeDefect& d) { return d.sign < 0; });
  if (plus == defects.end() || minus == defects.end()) {
    throw ConfigError("string enumeration needs one positive and one negative charge");
  }
  const Cell a = plus->site.cell;
  const Cell b = minus->site.cell;
  StringSet set;
  set.d0 = b.i - a.i;
  set.d1 = b.j - a.j;
  if (set.d0 < 0 || set.d1 < 0) {
    throw ConfigError("negative charge at " + to_string(minus->site) + " is not reachable from " +
                      to_string(plus->site) + " by a minimal string");
  }
  if (set.d0 + set.d1 < 1) throw ConfigError("charges are adjacent, no string fits between them");

  const Bitstring vacuum = vacuum_bitstring(geom);

  // Move sequences in lexicographic order, axis 0 before axis 1.
  std::vector<int> moves(static_cast<std::size_t>(set.d0), 0);
  moves.insert(moves.end(), static_cast<std::size_t>(set.d1), 1);
  std::vector<std::vector<int>> paths;
  do {
    if (auto p = path_atoms(geom, a, moves)) paths.push_back(std::move(*p));
  } while (std::next_permutation(moves.begin(), moves.end()));
  if (paths.empty()) throw ConfigError("no complete minimal string between the charges");

  for (std::size_t k = 0; k < paths.size(); ++k) {
    set.configs.push_back({"string_" + std::to_string(k + 1), ConfigKind::String, vacuum ^ mask_of(paths[k])});
  }
  set.configs.push_back({"broken_b", ConfigKind::Broken, vacuum});

  if (set.straight()) {
    const std::vector<int>& line = paths.front();
    set.region = line;
    set.configs.push_back({"charges_c", ConfigKind::Charges, vacuum & ~mask_of(line)});
    const Bitstring s = set.configs.front().bits;
    const int d = set.distance();
    // One pair of dynamical charges created on an inter-cell link of the string.
    for (int m = 0; m < d; ++m) {
      const std::string label =
          d == 2 ? (m == 0 ? "intermediate_j" : "intermediate_i") : "intermediate_" + std::to_string(m + 1);
      set.configs.push_back({label, ConfigKind::Intermediate, s & ~(Bitstring{1} << line[2 * m])});
    }
    if (line.size() >= 3) {
      const Bitstring outside = vacuum & ~mask_of(line);
      const auto at = [&](std::initializer_list<std::size_t> idx) {
        Bitstring r = outside;
        for (std::size_t i : idx) r |= Bitstring{1} << line[i];
        return r;
      };
      const std::size_t last = line.size() - 1;
      set.configs.push_back({"violation_v1", ConfigKind::Violation, at({0, 1})});
      set.configs.push_back({"violation_v2", ConfigKind::Violation, at({last - 1, last})});
      set.configs.push_back({"violation_v3", ConfigKind::Violation, at({0, 1, 2})});
    }
  } else {
    // Hexagon P(i,j) has links inter0(i,j), intra(i+1,j), inter1(i+1,j),
    // inter0(i,j+1), intra(i,j+1), inter1(i,j).
    std::set<int> region;
    for (int i = a.i; i < b.i; ++i) {
      for (int j = a.j; j < b.j; ++j) {
        const Site corners[][2] = {
            {{{i, j}, Sublattice::B}, {{i + 1, j}, Sublattice::A}},
            {{{i + 1, j}, Sublattice::A}, {{i + 1, j}, Sublattice::B}},
            {{{i + 1, j}, Sublattice::B}, {{i + 1, j + 1}, Sublattice::A}},
            {{{i, j + 1}, Sublattice::B}, {{i + 1, j + 1}, Sublattice::A}},
            {{{i, j + 1}, Sublattice::A}, {{i, j + 1}, Sublattice::B}},
            {{{i, j}, Sublattice::B}, {{i, j + 1}, Sublattice::A}},
        };
        for (const auto& link : corners) {
          if (const auto k = geom.atom_between(link[0], link[1])) region.insert(*k);
        }
      }
    }
    for (const auto& p : paths) region.insert(p.begin(), p.end());
    set.region.assign(region.begin(), region.end());
  }
  for (const auto& c : set.configs) {
    if (c.kind != ConfigKind::Violation && !satisfies_blockade(c.bits, geom)) {
      throw ConfigError("internal: configuration " + c.label + " violates the blockade");
    }
  }
  return set;
}

double string_tension(double rb, double omega, double cutoff) {
  const double c6 = omega * std::pow(rb, 6);
  const auto v = [&](double r) { return (cutoff <= 0.0 || r <= cutoff + 1e-9) ? c6 / std::pow(r, 6) : 0.0; };
  return v(std::sqrt(3.0)) - v(2.0);
}

double renormalized_mass(double delta, double rb, double omega) { return delta - 6.0 * std::pow(rb / 2.0, 6) * omega; }

double classical_crossing(int d, double delta, double rb, double omega, double cutoff) {
  if (d < 1) throw ConfigError("string length must be at least 1");
  return renormalized_mass(delta, rb, omega) / d - string_tension(rb, omega, cutoff);
}

double classical_crossing_exact(const StringSet& strings, const CouplingTable& couplings, double delta) {
  const Bitstring s = strings.of_kind(ConfigKind::String).front().bits;
  const Bitstring b = strings.get("broken_b").bits;
  const std::vector<double> pattern = [&] {
    std::vector<double> c(couplings.atom_count());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = bit(b, static_cast<int>(k)) ? 0.0 : 1.0;
    return c;
  }();
  DriveSample sample;
  sample.delta = delta;
  const double gap = classical_energy(b, couplings, sample, pattern) - classical_energy(s, couplings, sample, pattern);
  double weight = 0.0;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    weight += pattern[k] * ((bit(s, static_cast<int>(k)) ? 1.0 : 0.0) - (bit(b, static_cast<int>(k)) ? 1.0 : 0.0));
  }
  if (weight == 0.0) throw ConfigError("local pattern does not separate the string from the broken string");
  return gap / weight;
}

}  // namespace rydlgt
