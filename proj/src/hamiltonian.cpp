#include "rydlgt/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "rydlgt/error.hpp"

namespace rydlgt {

namespace {

constexpr std::uint32_t kUpFlag = 0x80000000U;
constexpr std::uint32_t kIndexMask = 0x7FFFFFFFU;

double interaction_energy(Bitstring s, const CouplingTable& couplings) {
  double e = 0.0;
  for (const auto& p : couplings.pairs()) {
    if (bit(s, p.i) && bit(s, p.k)) e += p.value;
  }
  return e;
}

}  // namespace

double blockade_radius(double c6, double omega) {
  if (!(c6 > 0.0) || !(omega > 0.0)) throw ConfigError("blockade radius needs positive C6 and Omega");
  return std::pow(c6 / omega, 1.0 / 6.0);
}

double classical_energy(Bitstring s, const CouplingTable& couplings, const DriveSample& sample,
                        std::span<const double> pattern) {
  double e = interaction_energy(s, couplings);
  for (std::size_t k = 0; k < couplings.atom_count(); ++k) {
    if (!bit(s, static_cast<int>(k))) continue;
    const double c = pattern.empty() ? 0.0 : pattern[k];
    e -= sample.delta - c * sample.delta_local;
  }
  return e;
}

RydbergOperator::RydbergOperator(std::shared_ptr<const BasisSpace> basis, const CouplingTable& couplings,
                                 std::vector<double> pattern)
    : basis_(std::move(basis)) {
  const std::size_t n = basis_->atom_count();
  if (couplings.atom_count() != n) throw ConfigError("coupling table does not match the basis geometry");
  if (basis_->size() > kIndexMask) throw CapacityError("basis too large for the operator index width");

  auto tables = std::make_shared<Tables>();
  const std::size_t dim = basis_->size();
  tables->excitations.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    tables->excitations[k] = static_cast<std::uint8_t>(std::popcount(basis_->state(k)));
  }
  if (basis_->mode() == BasisMode::Blockaded) {
    tables->row_start.reserve(dim + 1);
    tables->row_start.push_back(0);
    for (std::size_t k = 0; k < dim; ++k) {
      const Bitstring s = basis_->state(k);
      for (std::size_t l = 0; l < n; ++l) {
        const Bitstring t = s ^ (Bitstring{1} << l);
        if (const auto j = basis_->index_of(t)) {
          const std::uint32_t flag = bit(s, static_cast<int>(l)) ? kUpFlag : 0U;
          tables->partners.push_back(static_cast<std::uint32_t>(*j) | flag);
        }
      }
      tables->row_start.push_back(tables->partners.size());
    }
  }
  tables_ = std::move(tables);
  *this = with_couplings(couplings).with_pattern(std::move(pattern));
}

RydbergOperator RydbergOperator::with_couplings(const CouplingTable& couplings) const {
  if (couplings.atom_count() != basis_->atom_count()) {
    throw ConfigError("coupling table does not match the basis geometry");
  }
  auto interaction = std::make_shared<std::vector<double>>(dim());
  for (std::size_t k = 0; k < dim(); ++k) (*interaction)[k] = interaction_energy(basis_->state(k), couplings);
  RydbergOperator op = *this;
  op.couplings_ = std::make_shared<const CouplingTable>(couplings);
  op.interaction_ = std::move(interaction);
  if (op.pattern_weight_.size() != dim()) op.pattern_weight_.assign(dim(), 0.0);
  return op;
}

RydbergOperator RydbergOperator::with_pattern(std::vector<double> pattern) const {
  const std::size_t n = basis_->atom_count();
  if (!pattern.empty() && pattern.size() != n) {
    throw ConfigError("local pattern has " + std::to_string(pattern.size()) + " entries for " + std::to_string(n) +
                      " atoms");
  }
  for (double c : pattern) {
    if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("local pattern coefficients must lie in [0, 1]");
  }
  RydbergOperator op = *this;
  op.pattern_ = std::move(pattern);
  op.pattern_weight_.assign(dim(), 0.0);
  if (!op.pattern_.empty()) {
    for (std::size_t k = 0; k < dim(); ++k) {
      const Bitstring s = basis_->state(k);
      double w = 0.0;
      for (std::size_t l = 0; l < n; ++l) {
        if (bit(s, static_cast<int>(l))) w += op.pattern_[l];
      }
      op.pattern_weight_[k] = w;
    }
  }
  return op;
}

double RydbergOperator::diagonal(std::size_t k, const DriveSample& s) const {
  return (*interaction_)[k] - s.delta * tables_->excitations[k] + s.delta_local * pattern_weight_[k];
}

void RydbergOperator::apply_rows(const DriveSample& s, std::span<const cplx> in, std::span<cplx> out,
                                 std::size_t begin, std::size_t end) const {
  // <r|H|g> = Omega/2 e^{i phi}; the row state is |r> on the flipped atom
  // exactly when the up flag is set.
  const cplx up = 0.5 * s.omega * std::polar(1.0, s.phi);
  const cplx down = std::conj(up);
  const auto& t = *tables_;
  if (basis_->mode() == BasisMode::Blockaded) {
    for (std::size_t k = begin; k < end; ++k) {
      cplx acc = diagonal(k, s) * in[k];
      for (std::uint64_t e = t.row_start[k]; e < t.row_start[k + 1]; ++e) {
        const std::uint32_t p = t.partners[e];
        acc += ((p & kUpFlag) ? up : down) * in[p & kIndexMask];
      }
      out[k] = acc;
    }
    return;
  }
  const std::size_t n = basis_->atom_count();
  for (std::size_t k = begin; k < end; ++k) {
    cplx acc = diagonal(k, s) * in[k];
    for (std::size_t l = 0; l < n; ++l) {
      const std::size_t j = k ^ (std::size_t{1} << l);
      acc += (((k >> l) & 1U) ? up : down) * in[j];
    }
    out[k] = acc;
  }
}

void RydbergOperator::apply(const DriveSample& s, std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dim() || out.size() != dim()) throw ConfigError("operator applied to a vector of wrong size");
  const std::size_t d = dim();
  if (threads_ <= 1 || d < 4096) {
    apply_rows(s, in, out, 0, d);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (d + threads_ - 1) / threads_;
  for (unsigned w = 0; w < threads_; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(d, b + chunk);
    if (b >= e) break;
    workers.emplace_back([&, b, e] { apply_rows(s, in, out, b, e); });
  }
}

QuantumState RydbergOperator::apply(const DriveSample& s, const QuantumState& psi) const {
  if (psi.basis_ptr() != basis_) throw ConfigError("state and operator live on different bases");
  QuantumState out(basis_);
  apply(s, psi.amplitudes(), out.amplitudes());
  return out;
}

Eigen::MatrixXcd RydbergOperator::dense(const DriveSample& s, std::size_t max_dim) const {
  const std::size_t d = dim();
  if (d > max_dim) {
    throw CapacityError("dense Hamiltonian of dimension " + std::to_string(d) + " exceeds " + std::to_string(max_dim));
  }
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  const cplx up = 0.5 * s.omega * std::polar(1.0, s.phi);
  const std::size_t n = basis_->atom_count();
  for (std::size_t k = 0; k < d; ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    h(row, row) = diagonal(k, s);
    const Bitstring state = basis_->state(k);
    for (std::size_t l = 0; l < n; ++l) {
      const auto j = basis_->index_of(state ^ (Bitstring{1} << l));
      if (!j) continue;
      h(row, static_cast<Eigen::Index>(*j)) = bit(state, static_cast<int>(l)) ? up : std::conj(up);
    }
  }
  return h;
}

}  // namespace rydlgt
