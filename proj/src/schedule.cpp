#include "rydlgt/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "rydlgt/error.hpp"
#include "rydlgt/units.hpp"

namespace rydlgt {

Waveform::Waveform(std::vector<Breakpoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw ConfigError("waveform needs at least one breakpoint");
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (!(points_[k].t > points_[k - 1].t)) throw ConfigError("waveform breakpoint times must be strictly increasing");
  }
  for (const auto& p : points_) {
    if (!std::isfinite(p.t) || !std::isfinite(p.value)) throw ConfigError("waveform contains non-finite values");
  }
}

Waveform Waveform::constant(double value, double t_end) {
  if (t_end > 0.0) return Waveform({{0.0, value}, {t_end, value}});
  return Waveform({{0.0, value}});
}

double Waveform::at(double t) const {
  if (t <= points_.front().t) return points_.front().value;
  if (t >= points_.back().t) return points_.back().value;
  const auto hi = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double x, const Breakpoint& p) { return x < p.t; });
  const auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  return lo->value + w * (hi->value - lo->value);
}

double Waveform::max_abs() const {
  double m = 0.0;
  for (const auto& p : points_) m = std::max(m, std::abs(p.value));
  return m;
}

double Waveform::max_slope() const {
  double m = 0.0;
  for (std::size_t k = 1; k < points_.size(); ++k) {
    m = std::max(m, (points_[k].value - points_[k - 1].value) / (points_[k].t - points_[k - 1].t));
  }
  return m;
}

DriveSample DriveSchedule::at(double t) const {
  return DriveSample{omega.at(t), delta.at(t), phi.at(t), delta_local.at(t)};
}

void DriveSchedule::validate(std::size_t atom_count) const {
  if (!(t_end >= 0.0)) throw ConfigError("schedule duration must be non-negative");
  const std::pair<const char*, const Waveform*> channels[] = {
      {"omega", &omega}, {"delta", &delta}, {"phi", &phi}, {"delta_local", &delta_local}};
  for (const auto& [name, w] : channels) {
    if (w->points().empty()) throw ConfigError(std::string("channel ") + name + " is empty");
    if (w->start() != 0.0) throw ConfigError(std::string("channel ") + name + " must start at t = 0");
    if (w->points().size() > 1 && std::abs(w->end() - t_end) > 1e-12) {
      throw ConfigError(std::string("channel ") + name + " must end at t_end");
    }
  }
  if (!pattern.empty() && pattern.size() != atom_count) {
    throw ConfigError("local pattern has " + std::to_string(pattern.size()) + " entries for " +
                      std::to_string(atom_count) + " atoms");
  }
  for (double c : pattern) {
    if (!(c >= 0.0 && c <= 1.0)) throw ConfigError("local pattern coefficients must lie in [0, 1]");
  }
}

DriveSchedule constant_schedule(const DriveSample& sample, std::vector<double> pattern, double t_end) {
  DriveSchedule s;
  s.omega = Waveform::constant(sample.omega, t_end);
  s.delta = Waveform::constant(sample.delta, t_end);
  s.phi = Waveform::constant(sample.phi, t_end);
  s.delta_local = Waveform::constant(sample.delta_local, t_end);
  s.pattern = std::move(pattern);
  s.t_end = t_end;
  return s;
}

double adiabaticity_metric(const DriveSchedule& schedule) {
  const double omega = schedule.omega_max();
  if (omega == 0.0) return 0.0;
  return schedule.delta.max_slope() / (omega * omega / units::kTwoPi);
}

}  // namespace rydlgt
