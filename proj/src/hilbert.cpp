#include "rydlgt/hilbert.hpp"

#include <algorithm>
#include <cmath>

#include "rydlgt/error.hpp"

namespace rydlgt {

std::string format_bitstring(Bitstring s, std::size_t n) {
  std::string out(n, '0');
  for (std::size_t k = 0; k < n; ++k) {
    if (bit(s, static_cast<int>(k))) out[k] = '1';
  }
  return out;
}

Bitstring parse_bitstring(std::string_view text, std::size_t n) {
  if (text.size() != n) {
    throw ConfigError("bitstring has length " + std::to_string(text.size()) + ", expected " + std::to_string(n));
  }
  Bitstring s = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (text[k] == '1') {
      s |= Bitstring{1} << k;
    } else if (text[k] != '0') {
      throw ConfigError("bitstring contains invalid character '" + std::string(1, text[k]) + "'");
    }
  }
  return s;
}

std::string to_string(BasisMode mode) { return mode == BasisMode::Full ? "full" : "blockaded"; }

BasisMode parse_basis_mode(std::string_view text) {
  if (text == "full") return BasisMode::Full;
  if (text == "blockaded") return BasisMode::Blockaded;
  throw ConfigError("unknown basis mode '" + std::string(text) + "'");
}

std::vector<int> vertex_occupancy(Bitstring s, const Geometry& geom) {
  std::vector<int> counts(geom.vertices().size(), 0);
  for (std::size_t v = 0; v < counts.size(); ++v) {
    for (int k : geom.vertex_atoms(static_cast<int>(v))) counts[v] += bit(s, k) ? 1 : 0;
  }
  return counts;
}

bool satisfies_blockade(Bitstring s, const Geometry& geom) {
  for (std::size_t v = 0; v < geom.vertices().size(); ++v) {
    int count = 0;
    for (int k : geom.vertex_atoms(static_cast<int>(v))) count += bit(s, k) ? 1 : 0;
    if (count > 1) return false;
  }
  return true;
}

namespace {

// Depth-first over atoms with one busy flag per vertex.
class BlockadeEnumerator {
 public:
  BlockadeEnumerator(const Geometry& geom, std::size_t max_states, std::vector<Bitstring>& out)
      : max_states_(max_states), out_(out), busy_(geom.vertices().size(), 0) {
    for (const auto& atom : geom.atoms()) {
      ends_.emplace_back(*geom.vertex_index(atom.from), *geom.vertex_index(atom.to));
    }
  }

  void run() { visit(0, 0); }

 private:
  void visit(std::size_t atom, Bitstring bits) {
    if (atom == ends_.size()) {
      if (out_.size() == max_states_) {
        throw CapacityError("blockaded basis exceeds " + std::to_string(max_states_) + " states");
      }
      out_.push_back(bits);
      return;
    }
    visit(atom + 1, bits);
    const auto [u, w] = ends_[atom];
    if (busy_[u] || busy_[w]) return;
    busy_[u] = busy_[w] = 1;
    visit(atom + 1, bits | (Bitstring{1} << atom));
    busy_[u] = busy_[w] = 0;
  }

  std::size_t max_states_;
  std::vector<Bitstring>& out_;
  std::vector<char> busy_;
  std::vector<std::pair<std::size_t, std::size_t>> ends_;
};

void enumerate_blockaded(const Geometry& geom, std::size_t max_states, std::vector<Bitstring>& out) {
  BlockadeEnumerator(geom, max_states, out).run();
}

}  // namespace

std::shared_ptr<const BasisSpace> BasisSpace::enumerate(std::shared_ptr<const Geometry> geom, BasisMode mode,
                                                        BasisLimits limits) {
  const std::size_t n = geom->size();
  if (n > kMaxAtoms) throw CapacityError("geometry has " + std::to_string(n) + " atoms, at most 64 supported");
  auto basis = std::shared_ptr<BasisSpace>(new BasisSpace());
  basis->mode_ = mode;
  if (mode == BasisMode::Full) {
    if (n > limits.max_full_atoms || (n < 64 && (std::size_t{1} << n) > limits.max_states)) {
      throw CapacityError("full basis over " + std::to_string(n) + " atoms exceeds the configured bound");
    }
    basis->size_ = std::size_t{1} << n;
  } else {
    enumerate_blockaded(*geom, limits.max_states, basis->states_);
    std::sort(basis->states_.begin(), basis->states_.end());
    basis->size_ = basis->states_.size();
  }
  basis->geom_ = std::move(geom);
  return basis;
}

std::optional<std::size_t> BasisSpace::index_of(Bitstring s) const {
  if (mode_ == BasisMode::Full) {
    if (s >= size_) return std::nullopt;
    return static_cast<std::size_t>(s);
  }
  const auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

QuantumState::QuantumState(std::shared_ptr<const BasisSpace> basis)
    : basis_(std::move(basis)), amps_(basis_->size(), cplx{0.0, 0.0}) {}

QuantumState::QuantumState(std::shared_ptr<const BasisSpace> basis, std::vector<cplx> amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
  if (amps_.size() != basis_->size()) throw ConfigError("amplitude vector does not match basis size");
}

QuantumState QuantumState::basis_state(std::shared_ptr<const BasisSpace> basis, Bitstring s) {
  const auto k = basis->index_of(s);
  if (!k) throw ConfigError("bitstring " + format_bitstring(s, basis->atom_count()) + " is not in the basis");
  QuantumState psi(std::move(basis));
  psi.amps_[*k] = 1.0;
  return psi;
}

double QuantumState::norm() const { return std::sqrt(norm2(amps_)); }

void QuantumState::normalize() {
  const double nrm = norm();
  if (nrm == 0.0) throw NumericalError("cannot normalize a zero state", 0.0);
  for (auto& a : amps_) a /= nrm;
}

bool QuantumState::is_normalized(double tol) const { return std::abs(norm() - 1.0) <= tol; }

double QuantumState::fidelity(const QuantumState& other) const {
  if (basis_ != other.basis_) throw ConfigError("fidelity between states on different bases");
  return std::norm(inner(amps_, other.amps_));
}

double QuantumState::probability(Bitstring s) const {
  const auto k = basis_->index_of(s);
  return k ? std::norm(amps_[*k]) : 0.0;
}

cplx inner(std::span<const cplx> x, std::span<const cplx> y) {
  cplx acc{0.0, 0.0};
  for (std::size_t k = 0; k < x.size(); ++k) acc += std::conj(x[k]) * y[k];
  return acc;
}

double norm2(std::span<const cplx> x) {
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc;
}

QuantumState project(const QuantumState& state, std::shared_ptr<const BasisSpace> target) {
  if (&state.basis().geometry() != &target->geometry()) {
    throw ConfigError("projection between bases over different geometries");
  }
  QuantumState out(target);
  const auto& source = state.basis();
  if (target->size() <= source.size()) {
    for (std::size_t k = 0; k < target->size(); ++k) {
      if (const auto i = source.index_of(target->state(k))) out.amplitudes()[k] = state[*i];
    }
  } else {
    for (std::size_t i = 0; i < source.size(); ++i) {
      if (const auto k = target->index_of(source.state(i))) out.amplitudes()[*k] = state[i];
    }
  }
  return out;
}

}  // namespace rydlgt
