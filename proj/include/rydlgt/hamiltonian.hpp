#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "rydlgt/geometry.hpp"
#include "rydlgt/hilbert.hpp"
#include "rydlgt/schedule.hpp"

namespace rydlgt {

/// Resonant blockade radius (C6 / Omega)^(1/6). Throws ConfigError on
/// non-positive input.
double blockade_radius(double c6, double omega);

/// Diagonal energy of a product state: sum_{pairs} V n n - sum_l (delta - c_l delta_0) n_l.
/// An empty pattern means c_l = 0 everywhere.
double classical_energy(Bitstring s, const CouplingTable& couplings, const DriveSample& sample,
                        std::span<const double> pattern = {});

/// Matrix-free Rydberg Hamiltonian
///   H = sum V n n + Omega/2 sum (e^{i phi} sigma^+ + h.c.) - sum (delta - c_l delta_0) n
/// on a basis. On a blockaded basis flips leaving the subspace are dropped,
/// which is the projected operator P H P.
class RydbergOperator {
 public:
  RydbergOperator(std::shared_ptr<const BasisSpace> basis, const CouplingTable& couplings,
                  std::vector<double> pattern = {});

  /// Same basis tables with a different local pattern.
  RydbergOperator with_pattern(std::vector<double> pattern) const;
  /// Same flip tables with new couplings; only the diagonal is rebuilt.
  RydbergOperator with_couplings(const CouplingTable& couplings) const;

  const BasisSpace& basis() const { return *basis_; }
  const std::shared_ptr<const BasisSpace>& basis_ptr() const { return basis_; }
  const CouplingTable& couplings() const { return *couplings_; }
  std::span<const double> pattern() const { return pattern_; }
  std::size_t dim() const { return basis_->size(); }

  double diagonal(std::size_t k, const DriveSample& s) const;
  /// Interaction energy of basis state k.
  double interaction(std::size_t k) const { return (*interaction_)[k]; }

  /// out = H(s) in. Safe to call concurrently with distinct outputs.
  void apply(const DriveSample& s, std::span<const cplx> in, std::span<cplx> out) const;
  QuantumState apply(const DriveSample& s, const QuantumState& psi) const;

  /// Dense matrix, for oracles and small spectra.
  Eigen::MatrixXcd dense(const DriveSample& s, std::size_t max_dim = 4096) const;

  /// Row-partitioned threads inside apply; results do not depend on the count.
  void set_threads(unsigned threads) { threads_ = threads == 0 ? 1 : threads; }

 private:
  struct Tables {
    std::vector<std::uint8_t> excitations;
    // Blockaded mode: flip partners per row. High bit set when the row state
    // has the flipped atom excited.
    std::vector<std::uint64_t> row_start;
    std::vector<std::uint32_t> partners;
  };

  void apply_rows(const DriveSample& s, std::span<const cplx> in, std::span<cplx> out, std::size_t begin,
                  std::size_t end) const;

  std::shared_ptr<const BasisSpace> basis_;
  std::shared_ptr<const Tables> tables_;
  std::shared_ptr<const CouplingTable> couplings_;
  std::shared_ptr<const std::vector<double>> interaction_;
  std::vector<double> pattern_;
  std::vector<double> pattern_weight_;
  unsigned threads_ = 1;
};

}  // namespace rydlgt
