#include "rydlgt/noise.hpp"

#include <cmath>
#include <random>

#include "rydlgt/error.hpp"
#include "rydlgt/random.hpp"

namespace rydlgt {

void NoiseModel::validate() const {
  if (!(sigma_thermal_um >= 0.0) || !(sigma_static_um >= 0.0)) throw ConfigError("position jitter must be >= 0");
  const double p[] = {detection.p_r, detection.p_g};
  for (double f : p) {
    if (!(f >= 0.0 && f <= 1.0)) throw ConfigError("detection fidelities must lie in [0, 1]");
  }
}

namespace {

std::vector<Vec2> gaussian_offsets(std::size_t n, double sigma, std::uint64_t seed) {
  std::vector<Vec2> d(n);
  if (sigma == 0.0) return d;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (auto& v : d) {
    v.x = normal(rng);
    v.y = normal(rng);
  }
  return d;
}

}  // namespace

std::vector<CouplingTable> thermal_ensemble(const Geometry& geom, double c6, const NoiseModel& noise,
                                            std::size_t count, std::uint64_t seed, double cutoff) {
  noise.validate();
  const double a = geom.spec().a;
  const std::size_t n = geom.size();
  const auto fixed = gaussian_offsets(n, noise.sigma_static_um / a, derive_seed(seed, 0));
  std::vector<CouplingTable> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const auto shot = gaussian_offsets(n, noise.sigma_thermal_um / a, derive_seed(seed, r + 1));
    std::vector<Vec2> pos(n);
    for (std::size_t k = 0; k < n; ++k) {
      pos[k] = {geom.atoms()[k].position.x + fixed[k].x + shot[k].x,
                geom.atoms()[k].position.y + fixed[k].y + shot[k].y};
    }
    out.push_back(interaction_graph(pos, c6, cutoff));
  }
  return out;
}

double meanfield_energy_spread(Bitstring config, const Geometry& geom, double c6, const NoiseModel& noise,
                               double cutoff) {
  noise.validate();
  const double sigma = noise.sigma_thermal_um / geom.spec().a;
  std::vector<int> excited;
  for (int k = 0; k < static_cast<int>(geom.size()); ++k) {
    if (bit(config, k)) excited.push_back(k);
  }
  // dE_i = sum_j g_ij . (dx_i - dx_j) with g_ij the gradient of V(r_ij) in x_i.
  double total = 0.0;
  for (int i : excited) {
    Vec2 own{0.0, 0.0};
    double others = 0.0;
    for (int j : excited) {
      if (j == i) continue;
      const double r = geom.distance(i, j);
      if (cutoff > 0.0 && r > cutoff + 1e-9) continue;
      const double dv = -6.0 * c6 / std::pow(r, 7);
      const Vec2 u{(geom.atoms()[i].position.x - geom.atoms()[j].position.x) / r,
                   (geom.atoms()[i].position.y - geom.atoms()[j].position.y) / r};
      own.x += dv * u.x;
      own.y += dv * u.y;
      others += dv * dv;
    }
    total += sigma * sigma * (own.x * own.x + own.y * own.y + others);
  }
  return std::sqrt(total);
}

}  // namespace rydlgt
