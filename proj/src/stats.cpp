#include "rydlgt/stats.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <random>

#include "rydlgt/error.hpp"
#include "rydlgt/random.hpp"

namespace rydlgt {

ShotSet sample_shots(const QuantumState& psi, std::size_t n, std::uint64_t seed) {
  if (!psi.is_normalized(1e-8)) throw ConfigError("cannot sample from an unnormalized state");
  const auto& basis = psi.basis();
  std::vector<double> cumulative(basis.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    acc += std::norm(psi[k]);
    cumulative[k] = acc;
  }
  ShotSet out;
  out.atom_count = basis.atom_count();
  out.seed = seed;
  out.shots.reserve(n);
  std::mt19937_64 rng(derive_seed(seed, 0));
  for (std::size_t s = 0; s < n; ++s) {
    const double u = uniform01(rng) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    // Skip zero-weight states that share the cumulative value.
    while (it != cumulative.begin() && std::norm(psi[static_cast<std::size_t>(it - cumulative.begin())]) == 0.0) --it;
    out.shots.push_back(basis.state(static_cast<std::size_t>(it - cumulative.begin())));
  }
  return out;
}

ShotSet apply_detection_errors(const ShotSet& shots, const DetectionModel& model, std::uint64_t seed) {
  if (!(model.p_r >= 0.0 && model.p_r <= 1.0 && model.p_g >= 0.0 && model.p_g <= 1.0)) {
    throw ConfigError("detection fidelities must lie in [0, 1]");
  }
  ShotSet out = shots;
  for (std::size_t k = 0; k < out.shots.size(); ++k) {
    std::mt19937_64 rng(derive_seed(seed, k));
    Bitstring s = out.shots[k];
    for (std::size_t a = 0; a < out.atom_count; ++a) {
      const bool excited = bit(s, static_cast<int>(a));
      const double flip = excited ? 1.0 - model.p_r : 1.0 - model.p_g;
      if (uniform01(rng) < flip) s ^= Bitstring{1} << a;
    }
    out.shots[k] = s;
  }
  return out;
}

double perfect_read_probability(std::size_t n_ground, std::size_t n_rydberg, const DetectionModel& model) {
  return std::pow(model.p_g, static_cast<double>(n_ground)) * std::pow(model.p_r, static_cast<double>(n_rydberg));
}

FilterRegion aggressive_filter(const StringSet& strings) { return {"aggressive", strings.region}; }

FilterRegion conservative_filter(const StringSet& strings, const Geometry& geom, double margin) {
  FilterRegion f{"conservative", strings.region};
  for (int k = 0; k < static_cast<int>(geom.size()); ++k) {
    if (std::find(f.atoms.begin(), f.atoms.end(), k) != f.atoms.end()) continue;
    for (int r : strings.region) {
      if (geom.distance(k, r) <= margin + 1e-9) {
        f.atoms.push_back(k);
        break;
      }
    }
  }
  return f;
}

namespace {

Bitstring region_mask(const FilterRegion& region, std::size_t atom_count) {
  Bitstring m = 0;
  for (int k : region.atoms) {
    if (k < 0 || static_cast<std::size_t>(k) >= atom_count) {
      throw ConfigError("filter region '" + region.name + "' refers to atom " + std::to_string(k) +
                        " outside the array");
    }
    m |= Bitstring{1} << k;
  }
  return m;
}

// Labels reported by string_probabilities, in output order.
std::vector<NamedConfig> reported(const StringSet& strings) {
  std::vector<NamedConfig> out;
  for (const auto& c : strings.configs) {
    if (c.kind != ConfigKind::Violation) out.push_back(c);
  }
  return out;
}

ProbabilityRow counted(std::string label, std::size_t k, std::size_t n) {
  ProbabilityRow row{std::move(label), k, n, n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n), 0.0,
                     1.0};
  if (n > 0) std::tie(row.ci_low, row.ci_high) = clopper_pearson(k, n);
  return row;
}

template <class Weigh>
std::vector<std::pair<std::string, double>> tally(const StringSet& strings, Bitstring mask, Weigh&& each) {
  const auto configs = reported(strings);
  std::vector<double> totals(configs.size(), 0.0);
  double strings_total = 0.0;
  each([&](Bitstring s, double w) {
    const Bitstring restricted = s & mask;
    for (std::size_t c = 0; c < configs.size(); ++c) {
      if ((configs[c].bits & mask) != restricted) continue;
      totals[c] += w;
      if (configs[c].kind == ConfigKind::String) strings_total += w;
    }
  });
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t c = 0; c < configs.size(); ++c) out.emplace_back(configs[c].label, totals[c]);
  out.emplace_back("p_s", strings_total);
  return out;
}

}  // namespace

std::vector<ProbabilityRow> string_probabilities(const ShotSet& shots, const StringSet& strings,
                                                 const FilterRegion& region) {
  const Bitstring mask = region_mask(region, shots.atom_count);
  const auto totals = tally(strings, mask, [&](auto&& add) {
    for (Bitstring s : shots.shots) add(s, 1.0);
  });
  std::vector<ProbabilityRow> rows;
  for (const auto& [label, k] : totals) rows.push_back(counted(label, static_cast<std::size_t>(k), shots.shots.size()));
  return rows;
}

std::vector<ProbabilityRow> string_probabilities(const QuantumState& psi, const StringSet& strings,
                                                 const FilterRegion& region) {
  const Bitstring mask = region_mask(region, psi.basis().atom_count());
  const auto totals = tally(strings, mask, [&](auto&& add) {
    for (std::size_t k = 0; k < psi.size(); ++k) add(psi.basis().state(k), std::norm(psi[k]));
  });
  std::vector<ProbabilityRow> rows;
  for (const auto& [label, p] : totals) rows.push_back({label, 0, 0, p, 0.0, 0.0});
  return rows;
}

double probability_of(const std::vector<ProbabilityRow>& rows, const std::string& label) {
  for (const auto& r : rows) {
    if (r.label == label) return r.p;
  }
  throw ConfigError("no probability row labelled '" + label + "'");
}

Violation classify_violation(Bitstring s, const FilterRegion& region) {
  Violation first_pair = Violation::None;
  std::size_t run = 0;
  for (std::size_t i = 0; i <= region.atoms.size(); ++i) {
    const bool on = i < region.atoms.size() && bit(s, region.atoms[i]);
    if (on) {
      ++run;
      continue;
    }
    if (run >= 3) return Violation::V3;
    if (run == 2 && first_pair == Violation::None) first_pair = ((i - 2) % 2 == 0) ? Violation::V1 : Violation::V2;
    run = 0;
  }
  return first_pair;
}

namespace {

template <class Each>
std::array<double, 3> violation_totals(const FilterRegion& region, Each&& each) {
  std::array<double, 3> t{0.0, 0.0, 0.0};
  each([&](Bitstring s, double w) {
    switch (classify_violation(s, region)) {
      case Violation::V1: t[0] += w; break;
      case Violation::V2: t[1] += w; break;
      case Violation::V3: t[2] += w; break;
      case Violation::None: break;
    }
  });
  return t;
}

}  // namespace

std::vector<ProbabilityRow> violation_probabilities(const ShotSet& shots, const FilterRegion& region) {
  region_mask(region, shots.atom_count);
  const auto t = violation_totals(region, [&](auto&& add) {
    for (Bitstring s : shots.shots) add(s, 1.0);
  });
  const std::size_t n = shots.shots.size();
  return {counted("p_v1", static_cast<std::size_t>(t[0]), n), counted("p_v2", static_cast<std::size_t>(t[1]), n),
          counted("p_v3", static_cast<std::size_t>(t[2]), n)};
}

std::vector<ProbabilityRow> violation_probabilities(const QuantumState& psi, const FilterRegion& region) {
  region_mask(region, psi.basis().atom_count());
  const auto t = violation_totals(region, [&](auto&& add) {
    for (std::size_t k = 0; k < psi.size(); ++k) add(psi.basis().state(k), std::norm(psi[k]));
  });
  return {{"p_v1", 0, 0, t[0], 0.0, 0.0}, {"p_v2", 0, 0, t[1], 0.0, 0.0}, {"p_v3", 0, 0, t[2], 0.0, 0.0}};
}

std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double alpha) {
  if (k > n) throw ConfigError("success count exceeds trial count");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
  if (n == 0) return {0.0, 1.0};
  const auto kd = static_cast<double>(k);
  const auto nd = static_cast<double>(n);
  const double low = k == 0 ? 0.0 : boost::math::ibeta_inv(kd, nd - kd + 1.0, alpha / 2.0);
  const double high = k == n ? 1.0 : boost::math::ibeta_inv(kd + 1.0, nd - kd, 1.0 - alpha / 2.0);
  return {low, high};
}

}  // namespace rydlgt
