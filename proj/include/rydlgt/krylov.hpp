#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rydlgt/hilbert.hpp"

namespace rydlgt {

/// y = A x for a Hermitian A.
using MatVec = std::function<void(std::span<const cplx>, std::span<cplx>)>;

struct LanczosOptions {
  double tol = 1e-8;             // on the true residual ||A v - E v||
  std::size_t krylov_dim = 40;   // reduced automatically to fit memory_bytes
  std::size_t max_restarts = 400;
  std::size_t memory_bytes = std::size_t{1} << 30;
  std::uint64_t seed = 1;
};

struct Eigenpair {
  double value = 0.0;
  std::vector<cplx> vector;
  double residual = 0.0;
  std::size_t matvecs = 0;
};

/// Lowest eigenpair by explicitly restarted Lanczos with full
/// reorthogonalization. The start vector is drawn from `seed`, so the result
/// is reproducible. Throws NumericalError if tol is not reached.
Eigenpair lowest_eigenpair(std::size_t dim, const MatVec& apply, const LanczosOptions& options = {});

struct KrylovOptions {
  double tol = 1e-12;           // a-posteriori error bound per step
  std::size_t max_dim = 30;
  int max_halvings = 10;        // sub-steps tried before giving up
};

struct KrylovStepInfo {
  std::size_t substeps = 0;
  std::size_t max_dim_used = 0;
  double error = 0.0;
};

/// psi <- exp(-i A dt) psi via a Lanczos basis. Falls back to halving dt when
/// the basis limit is reached; throws NumericalError with the achieved error
/// bound if that fails too.
class KrylovPropagator {
 public:
  explicit KrylovPropagator(KrylovOptions options = {}) : options_(options) {}

  KrylovStepInfo step(const MatVec& apply, std::span<cplx> psi, double dt);

 private:
  // Returns false if the basis limit was hit before the bound dropped below tol.
  bool try_step(const MatVec& apply, std::span<cplx> psi, double dt, KrylovStepInfo& info);

  KrylovOptions options_;
  std::vector<std::vector<cplx>> basis_;
  std::vector<cplx> w_;
};

}  // namespace rydlgt
