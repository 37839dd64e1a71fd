#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rydlgt {

enum class Sublattice : std::uint8_t { A = 0, B = 1 };

struct Cell {
  int i = 0;  // axis 0
  int j = 0;  // axis 1
  auto operator<=>(const Cell&) const = default;
};

/// A vertex of the honeycomb lattice. Parity s_x is 0 on A and 1 on B.
struct Site {
  Cell cell;
  Sublattice sub = Sublattice::A;

  int parity() const { return sub == Sublattice::A ? 0 : 1; }
  int sign() const { return sub == Sublattice::A ? 1 : -1; }
  auto operator<=>(const Site&) const = default;
};

std::string to_string(const Site& site);

/// Intra-cell link A(i,j)-B(i,j), or an inter-cell link from B(i,j) to
/// A(i+1,j) (Axis0) or A(i,j+1) (Axis1).
enum class LinkKind : std::uint8_t { Intra = 0, Axis0 = 1, Axis1 = 2 };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double distance(Vec2 p, Vec2 q);

/// An atom sitting at the midpoint of a honeycomb link.
struct LinkAtom {
  int id = 0;  // dense lattice id, stable under charge placement
  Vec2 position;
  Site from;  // always the A endpoint for Intra, the B endpoint otherwise
  Site to;
  LinkKind kind = LinkKind::Intra;
  bool present = true;

  /// s_l: 0 for intra-cell links, 1 for inter-cell links.
  int parity() const { return kind == LinkKind::Intra ? 0 : 1; }
};

struct ChargeDefect {
  Site site;
  int sign = 1;  // +1 on A, -1 on B
};

struct LatticeSpec {
  int L0 = 1;
  int L1 = 1;
  double a = 1.0;  // lattice spacing in um, used for physical-unit checks
  /// Cells cut out of the patch together with their two vertices. Used to
  /// build reduced geometries; empty for the standard L0 x L1 patch.
  std::vector<Cell> trimmed_cells;

  void validate() const;  // throws ConfigError
  bool contains(Cell c) const;
};

/// Kagome arrangement of atoms on the links of an open L0 x L1 honeycomb
/// patch. Atom bit k in a bitstring refers to atoms()[k].
class Geometry {
 public:
  static Geometry build(const LatticeSpec& spec);

  /// Removes the three link-atoms around each site. Sites must be distinct,
  /// non-adjacent and interior (all three links present).
  Geometry with_charges(std::span<const Site> sites) const;

  const LatticeSpec& spec() const { return spec_; }
  /// Present atoms in lattice-id order.
  const std::vector<LinkAtom>& atoms() const { return atoms_; }
  /// Every link of the patch including removed ones.
  const std::vector<LinkAtom>& lattice() const { return lattice_; }
  const std::vector<ChargeDefect>& defects() const { return defects_; }
  std::size_t size() const { return atoms_.size(); }

  const std::vector<Site>& vertices() const { return vertices_; }
  std::optional<int> vertex_index(const Site& site) const;
  /// Indices of present atoms adjacent to vertex v.
  const std::vector<int>& vertex_atoms(int v) const { return vertex_atoms_[v]; }
  /// Number of links at vertex v in the patch, present or removed.
  int vertex_degree(int v) const { return vertex_degree_[v]; }
  bool is_defect(const Site& site) const;
  std::optional<int> defect_charge(const Site& site) const;

  /// Index of the present atom on link (from, to) in either orientation.
  std::optional<int> atom_between(const Site& x, const Site& y) const;
  std::optional<int> index_of_lattice_id(int id) const;

  double distance(int i, int k) const { return rydlgt::distance(atoms_[i].position, atoms_[k].position); }

  /// Lattice vertex coordinates in units of a.
  static Vec2 site_position(const Site& site);

 private:
  void index_present();

  LatticeSpec spec_;
  std::vector<LinkAtom> lattice_;
  std::vector<LinkAtom> atoms_;
  std::vector<int> lattice_to_index_;
  std::vector<Site> vertices_;
  std::vector<int> vertex_lookup_;
  std::vector<std::vector<int>> vertex_atoms_;
  std::vector<int> vertex_degree_;
  std::vector<ChargeDefect> defects_;
};

/// Atom count of a defect-free, untrimmed patch.
constexpr int expected_atom_count(int L0, int L1) { return 3 * L0 * L1 - L0 - L1; }

struct Coupling {
  int i = 0;
  int k = 0;
  double distance = 0.0;
  double value = 0.0;
};

/// Truncated van der Waals couplings V = C6 / r^6 (r in units of a).
class CouplingTable {
 public:
  CouplingTable() = default;
  CouplingTable(std::size_t atom_count, double c6, double cutoff, std::vector<Coupling> pairs);

  const std::vector<Coupling>& pairs() const { return pairs_; }
  double c6() const { return c6_; }
  double cutoff() const { return cutoff_; }
  std::size_t atom_count() const { return atom_count_; }
  /// Symmetric lookup; zero for pairs beyond the cutoff.
  double value(int i, int k) const;

 private:
  std::size_t atom_count_ = 0;
  double c6_ = 0.0;
  double cutoff_ = 0.0;
  std::vector<Coupling> pairs_;
  std::vector<double> dense_;
};

inline constexpr double kDefaultCutoff = 3.0;

/// All pairs within cutoff. A non-positive cutoff keeps every pair.
CouplingTable interaction_graph(const Geometry& geom, double c6, double cutoff = kDefaultCutoff);

/// Same as interaction_graph but with explicit atom positions (jittered arrays).
CouplingTable interaction_graph(std::span<const Vec2> positions, double c6, double cutoff = kDefaultCutoff);

struct HardwareReport {
  std::size_t atom_count = 0;
  double width_um = 0.0;
  double height_um = 0.0;
  bool count_ok = true;
  bool box_ok = true;

  bool ok() const { return count_ok && box_ok; }
  std::string summary() const;
};

inline constexpr std::size_t kHardwareMaxAtoms = 256;
inline constexpr double kHardwareBoxShortUm = 75.0;
inline constexpr double kHardwareBoxLongUm = 128.0;

/// Checks atom count and bounding box against the 256-atom, 75 x 128 um
/// field. The array may be rotated by 90 degrees to fit.
HardwareReport validate_hardware_envelope(const Geometry& geom);

}  // namespace rydlgt
