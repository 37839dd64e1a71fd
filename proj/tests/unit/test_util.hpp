#pragma once

#include <Eigen/Dense>
#include <memory>
#include <random>
#include <vector>

#include "rydlgt/geometry.hpp"
#include "rydlgt/hamiltonian.hpp"
#include "rydlgt/hilbert.hpp"

namespace rydlgt::testing {

inline std::shared_ptr<const Geometry> make_geometry(int L0, int L1, std::vector<Site> charges = {},
                                                     std::vector<Cell> trimmed = {}) {
  LatticeSpec spec;
  spec.L0 = L0;
  spec.L1 = L1;
  spec.trimmed_cells = std::move(trimmed);
  return std::make_shared<const Geometry>(Geometry::build(spec).with_charges(charges));
}

inline Site A(int i, int j) { return {{i, j}, Sublattice::A}; }
inline Site B(int i, int j) { return {{i, j}, Sublattice::B}; }

/// 5x3 patch with a d = 2 string and two corner cells trimmed (25 atoms).
inline std::shared_ptr<const Geometry> reduced_d2() { return make_geometry(5, 3, {A(1, 1), B(3, 1)}, {{0, 0}, {4, 2}}); }

inline std::vector<cplx> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

inline QuantumState random_state(const std::shared_ptr<const BasisSpace>& basis, std::mt19937_64& rng) {
  QuantumState psi(basis, random_vector(basis->size(), rng));
  psi.normalize();
  return psi;
}

/// exp(-i H t) for Hermitian H by eigendecomposition.
inline Eigen::MatrixXcd dense_propagator(const Eigen::MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::VectorXcd phase = (eig.eigenvalues().cast<cplx>() * cplx(0.0, -t)).array().exp();
  return eig.eigenvectors() * phase.asDiagonal() * eig.eigenvectors().adjoint();
}

inline Eigen::VectorXcd to_eigen(const QuantumState& psi) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(psi.size()));
  for (std::size_t k = 0; k < psi.size(); ++k) v[static_cast<Eigen::Index>(k)] = psi[k];
  return v;
}

/// Small geometries used for exhaustive checks, all with N <= 16.
inline std::vector<std::shared_ptr<const Geometry>> small_geometries() {
  return {make_geometry(1, 1),
          make_geometry(2, 1),
          make_geometry(1, 2),
          make_geometry(2, 2),
          make_geometry(2, 2, {}, {{1, 1}}),
          make_geometry(3, 2),
          make_geometry(3, 2, {}, {{0, 0}}),
          make_geometry(2, 3, {}, {{1, 2}}),
          make_geometry(3, 3, {A(1, 1)}, {{2, 2}, {0, 2}})};
}

}  // namespace rydlgt::testing
