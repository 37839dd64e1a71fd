#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rydlgt/geometry.hpp"

namespace rydlgt {

/// One bit per present atom, bit k = atoms()[k], 1 = Rydberg.
using Bitstring = std::uint64_t;
using cplx = std::complex<double>;

inline constexpr std::size_t kMaxAtoms = 64;

inline bool bit(Bitstring s, int k) { return ((s >> k) & 1U) != 0; }

/// '0'/'1' characters, atom 0 leftmost.
std::string format_bitstring(Bitstring s, std::size_t n);
/// Throws ConfigError on bad characters or length mismatch.
Bitstring parse_bitstring(std::string_view text, std::size_t n);

enum class BasisMode { Full, Blockaded };

std::string to_string(BasisMode mode);
BasisMode parse_basis_mode(std::string_view text);

struct BasisLimits {
  std::size_t max_states = std::size_t{1} << 24;
  std::size_t max_full_atoms = 24;
};

/// Excitation count on every vertex of the geometry.
std::vector<int> vertex_occupancy(Bitstring s, const Geometry& geom);
/// At most one excited atom around every vertex.
bool satisfies_blockade(Bitstring s, const Geometry& geom);

/// Indexed set of bitstrings, either all 2^N or the blockade subspace sorted
/// ascending by value.
class BasisSpace {
 public:
  static std::shared_ptr<const BasisSpace> enumerate(std::shared_ptr<const Geometry> geom, BasisMode mode,
                                                     BasisLimits limits = {});

  BasisMode mode() const { return mode_; }
  const Geometry& geometry() const { return *geom_; }
  const std::shared_ptr<const Geometry>& geometry_ptr() const { return geom_; }
  std::size_t size() const { return size_; }
  std::size_t atom_count() const { return geom_->size(); }

  Bitstring state(std::size_t k) const { return mode_ == BasisMode::Full ? static_cast<Bitstring>(k) : states_[k]; }
  std::optional<std::size_t> index_of(Bitstring s) const;
  bool contains(Bitstring s) const { return index_of(s).has_value(); }

 private:
  BasisSpace() = default;

  std::shared_ptr<const Geometry> geom_;
  BasisMode mode_ = BasisMode::Full;
  std::size_t size_ = 0;
  std::vector<Bitstring> states_;  // empty in Full mode
};

/// Complex amplitudes over a basis.
class QuantumState {
 public:
  QuantumState() = default;
  explicit QuantumState(std::shared_ptr<const BasisSpace> basis);
  QuantumState(std::shared_ptr<const BasisSpace> basis, std::vector<cplx> amplitudes);

  static QuantumState basis_state(std::shared_ptr<const BasisSpace> basis, Bitstring s);

  const BasisSpace& basis() const { return *basis_; }
  const std::shared_ptr<const BasisSpace>& basis_ptr() const { return basis_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  std::span<cplx> amplitudes() { return amps_; }
  std::size_t size() const { return amps_.size(); }
  cplx operator[](std::size_t k) const { return amps_[k]; }

  double norm() const;
  void normalize();
  bool is_normalized(double tol = 1e-10) const;
  /// |<this|other>|^2 for states on the same basis.
  double fidelity(const QuantumState& other) const;
  /// |amplitude|^2 of a bitstring, zero when outside the basis.
  double probability(Bitstring s) const;

 private:
  std::shared_ptr<const BasisSpace> basis_;
  std::vector<cplx> amps_;
};

cplx inner(std::span<const cplx> x, std::span<const cplx> y);  // <x|y>
double norm2(std::span<const cplx> x);

/// Restrict a state to another basis over the same geometry: components
/// outside the target are dropped. Covers both projection onto the blockade
/// subspace and the isometric embedding back into the full space.
QuantumState project(const QuantumState& state, std::shared_ptr<const BasisSpace> target);
inline QuantumState embed(const QuantumState& state, std::shared_ptr<const BasisSpace> full) {
  return project(state, std::move(full));
}

}  // namespace rydlgt
