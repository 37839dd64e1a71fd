#include <Eigen/Eigenvalues>
#include <cmath>

#include "rydlgt/error.hpp"
#include "rydlgt/krylov.hpp"

namespace rydlgt {

bool KrylovPropagator::try_step(const MatVec& apply, std::span<cplx> psi, double dt, KrylovStepInfo& info) {
  const std::size_t dim = psi.size();
  const std::size_t m = std::min(options_.max_dim, dim);
  if (basis_.size() < m + 1) basis_.resize(m + 1);
  for (auto& v : basis_) v.resize(dim);
  w_.resize(dim);

  const double beta0 = std::sqrt(norm2(psi));
  if (beta0 == 0.0) return true;
  for (std::size_t k = 0; k < dim; ++k) basis_[0][k] = psi[k] / beta0;

  std::vector<double> alpha, beta;
  Eigen::VectorXcd coeff;
  for (std::size_t j = 0; j < m; ++j) {
    apply(basis_[j], w_);
    alpha.push_back(inner(basis_[j], w_).real());
    for (std::size_t i = 0; i <= j; ++i) {
      const cplx c = inner(basis_[i], w_);
      for (std::size_t k = 0; k < dim; ++k) w_[k] -= c * basis_[i][k];
    }
    const double b = std::sqrt(norm2(w_));
    beta.push_back(b);

    const auto size = static_cast<Eigen::Index>(j + 1);
    Eigen::VectorXd diag(size), off(size - 1);
    for (Eigen::Index i = 0; i < size; ++i) diag[i] = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < size; ++i) off[i] = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& u = tri.eigenvectors();
    Eigen::VectorXcd phase(size);
    for (Eigen::Index i = 0; i < size; ++i) phase[i] = std::polar(u(0, i), -tri.eigenvalues()[i] * dt);
    coeff = u.cast<cplx>() * phase;

    // Norm of the neglected component beta_j * |c_j| bounds the step error.
    const double error = beta0 * b * std::abs(coeff[size - 1]);
    const bool happy = b < 1e-13 * std::max(1.0, std::abs(alpha.back()));
    info.max_dim_used = std::max(info.max_dim_used, j + 1);
    if (error < options_.tol || happy || j + 1 == dim) {
      info.error = std::max(info.error, happy ? 0.0 : error);
      for (std::size_t k = 0; k < dim; ++k) {
        cplx acc{0.0, 0.0};
        for (Eigen::Index i = 0; i < size; ++i) acc += coeff[i] * basis_[static_cast<std::size_t>(i)][k];
        psi[k] = beta0 * acc;
      }
      return true;
    }
    if (j + 1 == m) {
      info.error = error;
      return false;
    }
    for (std::size_t k = 0; k < dim; ++k) basis_[j + 1][k] = w_[k] / b;
  }
  return false;
}

KrylovStepInfo KrylovPropagator::step(const MatVec& apply, std::span<cplx> psi, double dt) {
  KrylovStepInfo info;
  if (dt == 0.0) return info;
  const std::vector<cplx> original(psi.begin(), psi.end());
  for (int halving = 0; halving <= options_.max_halvings; ++halving) {
    const std::size_t pieces = std::size_t{1} << halving;
    std::copy(original.begin(), original.end(), psi.begin());
    info = KrylovStepInfo{};
    bool ok = true;
    for (std::size_t p = 0; p < pieces && ok; ++p) ok = try_step(apply, psi, dt / static_cast<double>(pieces), info);
    if (ok) {
      info.substeps = pieces;
      return info;
    }
  }
  throw NumericalError("Krylov step of " + std::to_string(dt) + " us did not reach tolerance", info.error);
}

}  // namespace rydlgt
