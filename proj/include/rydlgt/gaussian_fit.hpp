#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace rydlgt {

/// y = offset + amplitude exp(-(x - center)^2 / (2 width^2)).
struct GaussianFit {
  double amplitude = 0.0;
  double center = 0.0;
  double width = 0.0;
  double offset = 0.0;
  double amplitude_err = 0.0;
  double center_err = 0.0;
  double width_err = 0.0;
  double offset_err = 0.0;
  double rss = 0.0;
  std::size_t points = 0;
  std::size_t iterations = 0;
  bool converged = false;
  /// Converged, at least one spare degree of freedom, and the largest sample
  /// is neither the first nor the last point.
  bool reliable = false;
  std::string note;

  double operator()(double x) const;
};

/// Levenberg-Marquardt fit seeded at the first maximum. Standard errors come
/// from the covariance (J^T J)^{-1} rss / (n - 4). Never throws on bad data;
/// inspect converged / reliable / note.
GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y);

/// Number of leading points up to the first local minimum after the global
/// maximum (ties resolved towards the first maximum).
std::size_t rising_window(std::span<const double> y);

}  // namespace rydlgt
