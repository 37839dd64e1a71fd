#include "rydlgt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rydlgt/error.hpp"

namespace rydlgt {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;
constexpr double kDistanceSlack = 1e-9;

Site site_a(int i, int j) { return Site{Cell{i, j}, Sublattice::A}; }
Site site_b(int i, int j) { return Site{Cell{i, j}, Sublattice::B}; }

bool shares_vertex(const LinkAtom& atom, const Site& s) { return atom.from == s || atom.to == s; }

}  // namespace

std::string to_string(const Site& site) {
  std::ostringstream out;
  out << (site.sub == Sublattice::A ? 'A' : 'B') << '(' << site.cell.i << ',' << site.cell.j << ')';
  return out.str();
}

double distance(Vec2 p, Vec2 q) { return std::hypot(p.x - q.x, p.y - q.y); }

void LatticeSpec::validate() const {
  if (L0 < 1 || L1 < 1) {
    throw ConfigError("lattice dimensions must be >= 1, got " + std::to_string(L0) + "x" + std::to_string(L1));
  }
  if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("lattice spacing a must be positive");
  for (const auto& c : trimmed_cells) {
    if (c.i < 0 || c.i >= L0 || c.j < 0 || c.j >= L1) {
      throw ConfigError("trimmed cell (" + std::to_string(c.i) + "," + std::to_string(c.j) + ") outside the patch");
    }
  }
}

bool LatticeSpec::contains(Cell c) const {
  if (c.i < 0 || c.i >= L0 || c.j < 0 || c.j >= L1) return false;
  return std::find(trimmed_cells.begin(), trimmed_cells.end(), c) == trimmed_cells.end();
}

Vec2 Geometry::site_position(const Site& site) {
  // Honeycomb lattice vectors (2, 0) and (1, sqrt3); nearest link midpoints
  // are then exactly one unit apart.
  Vec2 p{2.0 * site.cell.i + site.cell.j, kSqrt3 * site.cell.j};
  if (site.sub == Sublattice::B) {
    p.x += 1.0;
    p.y += 1.0 / kSqrt3;
  }
  return p;
}

Geometry Geometry::build(const LatticeSpec& spec) {
  spec.validate();
  Geometry g;
  g.spec_ = spec;

  auto add_link = [&](const Site& from, const Site& to, LinkKind kind) {
    LinkAtom atom;
    atom.id = static_cast<int>(g.lattice_.size());
    atom.from = from;
    atom.to = to;
    atom.kind = kind;
    const Vec2 p = site_position(from);
    const Vec2 q = site_position(to);
    atom.position = Vec2{0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
    g.lattice_.push_back(atom);
  };

  for (int j = 0; j < spec.L1; ++j) {
    for (int i = 0; i < spec.L0; ++i) {
      if (!spec.contains({i, j})) continue;
      add_link(site_a(i, j), site_b(i, j), LinkKind::Intra);
      if (spec.contains({i + 1, j})) add_link(site_b(i, j), site_a(i + 1, j), LinkKind::Axis0);
      if (spec.contains({i, j + 1})) add_link(site_b(i, j), site_a(i, j + 1), LinkKind::Axis1);
    }
  }

  g.vertex_lookup_.assign(static_cast<std::size_t>(2 * spec.L0 * spec.L1), -1);
  for (int j = 0; j < spec.L1; ++j) {
    for (int i = 0; i < spec.L0; ++i) {
      if (!spec.contains({i, j})) continue;
      for (Site s : {site_a(i, j), site_b(i, j)}) {
        g.vertex_lookup_[static_cast<std::size_t>(2 * (j * spec.L0 + i) + s.parity())] =
            static_cast<int>(g.vertices_.size());
        g.vertices_.push_back(s);
      }
    }
  }
  g.vertex_degree_.assign(g.vertices_.size(), 0);
  for (const auto& atom : g.lattice_) {
    ++g.vertex_degree_[*g.vertex_index(atom.from)];
    ++g.vertex_degree_[*g.vertex_index(atom.to)];
  }
  g.index_present();
  return g;
}

void Geometry::index_present() {
  atoms_.clear();
  lattice_to_index_.assign(lattice_.size(), -1);
  for (const auto& atom : lattice_) {
    if (!atom.present) continue;
    lattice_to_index_[static_cast<std::size_t>(atom.id)] = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
  }
  vertex_atoms_.assign(vertices_.size(), {});
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    vertex_atoms_[*vertex_index(atoms_[k].from)].push_back(static_cast<int>(k));
    vertex_atoms_[*vertex_index(atoms_[k].to)].push_back(static_cast<int>(k));
  }
}

Geometry Geometry::with_charges(std::span<const Site> sites) const {
  Geometry g = *this;
  for (const Site& site : sites) {
    const auto v = g.vertex_index(site);
    if (!v) throw ConfigError("charge site " + to_string(site) + " is not part of the lattice");
    if (g.is_defect(site)) throw ConfigError("charge site " + to_string(site) + " already holds a charge");
    for (const auto& d : g.defects_) {
      for (const auto& atom : g.lattice_) {
        if (shares_vertex(atom, site) && shares_vertex(atom, d.site)) {
          throw ConfigError("charge at " + to_string(site) + " overlaps the defect at " + to_string(d.site));
        }
      }
    }
    if (g.vertex_degree_[*v] != 3 || g.vertex_atoms_[*v].size() != 3) {
      throw ConfigError("charge site " + to_string(site) + " is on the boundary (fewer than 3 adjacent atoms)");
    }
    for (auto& atom : g.lattice_) {
      if (shares_vertex(atom, site)) atom.present = false;
    }
    g.defects_.push_back(ChargeDefect{site, site.sign()});
    g.index_present();
  }
  return g;
}

std::optional<int> Geometry::vertex_index(const Site& site) const {
  const auto& c = site.cell;
  if (c.i < 0 || c.i >= spec_.L0 || c.j < 0 || c.j >= spec_.L1) return std::nullopt;
  const int v = vertex_lookup_[static_cast<std::size_t>(2 * (c.j * spec_.L0 + c.i) + site.parity())];
  if (v < 0) return std::nullopt;
  return v;
}

bool Geometry::is_defect(const Site& site) const { return defect_charge(site).has_value(); }

std::optional<int> Geometry::defect_charge(const Site& site) const {
  for (const auto& d : defects_) {
    if (d.site == site) return d.sign;
  }
  return std::nullopt;
}

std::optional<int> Geometry::atom_between(const Site& x, const Site& y) const {
  const auto v = vertex_index(x);
  if (!v) return std::nullopt;
  for (int k : vertex_atoms_[*v]) {
    const auto& atom = atoms_[static_cast<std::size_t>(k)];
    if ((atom.from == x && atom.to == y) || (atom.from == y && atom.to == x)) return k;
  }
  return std::nullopt;
}

std::optional<int> Geometry::index_of_lattice_id(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= lattice_to_index_.size()) return std::nullopt;
  const int k = lattice_to_index_[static_cast<std::size_t>(id)];
  if (k < 0) return std::nullopt;
  return k;
}

CouplingTable::CouplingTable(std::size_t atom_count, double c6, double cutoff, std::vector<Coupling> pairs)
    : atom_count_(atom_count), c6_(c6), cutoff_(cutoff), pairs_(std::move(pairs)), dense_(atom_count * atom_count, 0.0) {
  for (const auto& p : pairs_) {
    dense_[static_cast<std::size_t>(p.i) * atom_count_ + static_cast<std::size_t>(p.k)] = p.value;
    dense_[static_cast<std::size_t>(p.k) * atom_count_ + static_cast<std::size_t>(p.i)] = p.value;
  }
}

double CouplingTable::value(int i, int k) const {
  return dense_[static_cast<std::size_t>(i) * atom_count_ + static_cast<std::size_t>(k)];
}

CouplingTable interaction_graph(std::span<const Vec2> positions, double c6, double cutoff) {
  if (!(c6 > 0.0)) throw ConfigError("C6 must be positive");
  const double limit = cutoff > 0.0 ? cutoff + kDistanceSlack : std::numeric_limits<double>::infinity();
  std::vector<Coupling> pairs;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    for (std::size_t k = i + 1; k < positions.size(); ++k) {
      const double r = distance(positions[i], positions[k]);
      if (r > limit) continue;
      pairs.push_back(Coupling{static_cast<int>(i), static_cast<int>(k), r, c6 / std::pow(r, 6)});
    }
  }
  return CouplingTable(positions.size(), c6, cutoff, std::move(pairs));
}

CouplingTable interaction_graph(const Geometry& geom, double c6, double cutoff) {
  std::vector<Vec2> positions;
  positions.reserve(geom.size());
  for (const auto& atom : geom.atoms()) positions.push_back(atom.position);
  return interaction_graph(positions, c6, cutoff);
}

std::string HardwareReport::summary() const {
  std::ostringstream out;
  out << atom_count << " atoms, bounding box " << width_um << " x " << height_um << " um";
  if (!count_ok) out << "; fail: count exceeds " << kHardwareMaxAtoms;
  if (!box_ok) out << "; fail: box exceeds " << kHardwareBoxShortUm << " x " << kHardwareBoxLongUm << " um";
  if (ok()) out << "; pass";
  return out.str();
}

HardwareReport validate_hardware_envelope(const Geometry& geom) {
  HardwareReport report;
  report.atom_count = geom.size();
  report.count_ok = report.atom_count <= kHardwareMaxAtoms;
  if (geom.size() > 0) {
    double xmin = std::numeric_limits<double>::infinity(), ymin = xmin;
    double xmax = -xmin, ymax = -xmin;
    for (const auto& atom : geom.atoms()) {
      xmin = std::min(xmin, atom.position.x);
      xmax = std::max(xmax, atom.position.x);
      ymin = std::min(ymin, atom.position.y);
      ymax = std::max(ymax, atom.position.y);
    }
    report.width_um = (xmax - xmin) * geom.spec().a;
    report.height_um = (ymax - ymin) * geom.spec().a;
  }
  const double lo = std::min(report.width_um, report.height_um);
  const double hi = std::max(report.width_um, report.height_um);
  report.box_ok = lo <= kHardwareBoxShortUm && hi <= kHardwareBoxLongUm;
  return report;
}

}  // namespace rydlgt
