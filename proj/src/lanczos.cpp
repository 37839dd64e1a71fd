#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "rydlgt/error.hpp"
#include "rydlgt/krylov.hpp"

namespace rydlgt {

namespace {

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t k = 0; k < y.size(); ++k) y[k] += a * x[k];
}

void scale(double a, std::span<cplx> x) {
  for (auto& v : x) v *= a;
}

}  // namespace

Eigenpair lowest_eigenpair(std::size_t dim, const MatVec& apply, const LanczosOptions& options) {
  if (dim == 0) throw ConfigError("eigenproblem of dimension zero");
  Eigenpair result;
  if (dim == 1) {
    std::vector<cplx> v{1.0}, w(1);
    apply(v, w);
    result.value = w[0].real();
    result.vector = std::move(v);
    result.matvecs = 1;
    return result;
  }

  const std::size_t by_memory = std::max<std::size_t>(3, options.memory_bytes / (sizeof(cplx) * dim));
  const std::size_t m = std::min({options.krylov_dim, dim, by_memory});

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  std::vector<cplx> start(dim);
  for (auto& v : start) v = cplx(normal(rng), normal(rng));
  scale(1.0 / std::sqrt(norm2(start)), start);

  std::vector<std::vector<cplx>> basis(m, std::vector<cplx>(dim));
  std::vector<cplx> w(dim);
  std::vector<double> alpha, beta;
  double residual = 0.0;

  for (std::size_t restart = 0; restart <= options.max_restarts; ++restart) {
    basis[0] = start;
    alpha.clear();
    beta.clear();
    std::size_t k = 0;
    bool breakdown = false;
    for (; k < m; ++k) {
      apply(basis[k], w);
      ++result.matvecs;
      alpha.push_back(inner(basis[k], w).real());
      // Two Gram-Schmidt passes keep the basis orthogonal to working precision.
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i <= k; ++i) axpy(-inner(basis[i], w), basis[i], w);
      }
      const double b = std::sqrt(norm2(w));
      beta.push_back(b);
      if (b < 1e-12 * std::max(1.0, std::abs(alpha.back()))) {
        breakdown = true;
        ++k;
        break;
      }
      if (k + 1 < m) {
        basis[k + 1] = w;
        scale(1.0 / b, basis[k + 1]);
      }
    }
    const std::size_t size = std::min(k, m);

    Eigen::VectorXd diag(static_cast<Eigen::Index>(size));
    Eigen::VectorXd off(static_cast<Eigen::Index>(size > 0 ? size - 1 : 0));
    for (std::size_t i = 0; i < size; ++i) diag[static_cast<Eigen::Index>(i)] = alpha[i];
    for (std::size_t i = 0; i + 1 < size; ++i) off[static_cast<Eigen::Index>(i)] = beta[i];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    tri.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    const double theta = tri.eigenvalues()[0];
    const Eigen::VectorXd s = tri.eigenvectors().col(0);

    std::fill(start.begin(), start.end(), cplx{0.0, 0.0});
    for (std::size_t i = 0; i < size; ++i) axpy(s[static_cast<Eigen::Index>(i)], basis[i], start);
    scale(1.0 / std::sqrt(norm2(start)), start);

    const double estimate = breakdown ? 0.0 : beta[size - 1] * std::abs(s[static_cast<Eigen::Index>(size - 1)]);
    if (estimate > options.tol) {
      residual = estimate;
      continue;
    }
    apply(start, w);
    ++result.matvecs;
    axpy(-theta, start, w);
    residual = std::sqrt(norm2(w));
    if (residual < options.tol) {
      result.value = theta;
      result.vector = std::move(start);
      result.residual = residual;
      return result;
    }
  }
  throw NumericalError("Lanczos did not converge after " + std::to_string(options.max_restarts) + " restarts",
                       residual);
}

}  // namespace rydlgt
