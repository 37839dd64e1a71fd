#pragma once

#include <span>
#include <string>
#include <vector>

namespace rydlgt {

struct Breakpoint {
  double t = 0.0;
  double value = 0.0;
};

/// Piecewise-linear time course defined by strictly increasing breakpoints.
/// Values outside the breakpoint range are held constant.
class Waveform {
 public:
  Waveform() = default;
  explicit Waveform(std::vector<Breakpoint> points);

  static Waveform constant(double value, double t_end);

  double at(double t) const;
  const std::vector<Breakpoint>& points() const { return points_; }
  double start() const { return points_.front().t; }
  double end() const { return points_.back().t; }
  double max_abs() const;
  /// Largest positive slope over all segments.
  double max_slope() const;

 private:
  std::vector<Breakpoint> points_;
};

/// Instantaneous drive parameters. Energies in rad/us, phase in rad.
struct DriveSample {
  double omega = 0.0;
  double delta = 0.0;
  double phi = 0.0;
  double delta_local = 0.0;
};

/// Omega(t), delta(t), phi(t), delta_0(t) plus the static local pattern c_l.
struct DriveSchedule {
  Waveform omega;
  Waveform delta;
  Waveform phi;
  Waveform delta_local;
  std::vector<double> pattern;
  double t_end = 0.0;

  DriveSample at(double t) const;
  double omega_max() const { return omega.max_abs(); }
  /// Every channel spans [0, t_end] and the pattern is empty (all c_l = 0) or
  /// holds one c_l in [0,1] per atom. Throws ConfigError.
  void validate(std::size_t atom_count) const;
};

/// Constant drive for t in [0, t_end].
DriveSchedule constant_schedule(const DriveSample& sample, std::vector<double> pattern, double t_end);

/// Peak detuning sweep rate in units of R0 = Omega_max^2 / 2pi.
double adiabaticity_metric(const DriveSchedule& schedule);

}  // namespace rydlgt
