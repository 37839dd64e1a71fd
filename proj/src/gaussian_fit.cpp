#include "rydlgt/gaussian_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace rydlgt {

double GaussianFit::operator()(double x) const {
  const double z = (x - center) / width;
  return offset + amplitude * std::exp(-0.5 * z * z);
}

namespace {

using Vec4 = Eigen::Vector4d;

double model(const Vec4& p, double x) {
  const double z = (x - p[1]) / p[2];
  return p[3] + p[0] * std::exp(-0.5 * z * z);
}

double residual_sum(const Vec4& p, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = y[k] - model(p, x[k]);
    s += r * r;
  }
  return s;
}

Eigen::MatrixXd jacobian(const Vec4& p, std::span<const double> x) {
  Eigen::MatrixXd j(static_cast<Eigen::Index>(x.size()), 4);
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double z = (x[k] - p[1]) / p[2];
    const double e = std::exp(-0.5 * z * z);
    const auto r = static_cast<Eigen::Index>(k);
    j(r, 0) = e;
    j(r, 1) = p[0] * e * z / p[2];
    j(r, 2) = p[0] * e * z * z / p[2];
    j(r, 3) = 1.0;
  }
  return j;
}

std::size_t first_argmax(std::span<const double> y) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < y.size(); ++k) {
    if (y[k] > y[best]) best = k;
  }
  return best;
}

}  // namespace

std::size_t rising_window(std::span<const double> y) {
  if (y.empty()) return 0;
  std::size_t e = first_argmax(y);
  while (e + 1 < y.size() && y[e + 1] <= y[e]) ++e;
  return e + 1;
}

GaussianFit fit_gaussian(std::span<const double> x, std::span<const double> y) {
  GaussianFit fit;
  fit.points = x.size();
  if (x.size() != y.size() || x.size() < 4) {
    fit.note = "need at least 4 points";
    return fit;
  }
  const std::size_t peak = first_argmax(y);
  const double lo = *std::min_element(y.begin(), y.end());
  const double span = x.back() - x.front();

  // Width guess from the half-maximum crossings nearest the peak.
  const double half = 0.5 * (y[peak] + lo);
  double left = std::numeric_limits<double>::quiet_NaN();
  double right = left;
  for (std::size_t k = peak; k-- > 0;) {
    if (y[k] <= half) {
      left = x[k];
      break;
    }
  }
  for (std::size_t k = peak + 1; k < y.size(); ++k) {
    if (y[k] <= half) {
      right = x[k];
      break;
    }
  }
  double hwhm = 0.25 * std::abs(span);
  if (!std::isnan(left) && !std::isnan(right)) {
    hwhm = 0.5 * (right - left);
  } else if (!std::isnan(left)) {
    hwhm = x[peak] - left;
  } else if (!std::isnan(right)) {
    hwhm = right - x[peak];
  }
  Vec4 p(y[peak] - lo, x[peak], std::max(hwhm / std::sqrt(2.0 * std::log(2.0)), 1e-6 * std::abs(span)), lo);
  if (p[2] == 0.0) p[2] = 1.0;

  double rss = residual_sum(p, x, y);
  double lambda = 1e-3;
  Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  for (fit.iterations = 0; fit.iterations < 500; ++fit.iterations) {
    const Eigen::MatrixXd j = jacobian(p, x);
    Eigen::VectorXd r(static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) r[static_cast<Eigen::Index>(k)] = yv[static_cast<Eigen::Index>(k)] - model(p, x[k]);
    const Eigen::Matrix4d jtj = j.transpose() * j;
    const Vec4 g = j.transpose() * r;
    bool improved = false;
    double change = 0.0;
    while (lambda < 1e12) {
      Eigen::Matrix4d a = jtj;
      for (int i = 0; i < 4; ++i) a(i, i) += lambda * std::max(jtj(i, i), 1e-12);
      const Vec4 step = a.ldlt().solve(g);
      const Vec4 trial = p + step;
      const double trial_rss = residual_sum(trial, x, y);
      if (std::isfinite(trial_rss) && trial_rss <= rss) {
        change = rss - trial_rss;
        improved = true;
        p = trial;
        rss = trial_rss;
        lambda = std::max(lambda / 10.0, 1e-15);
        break;
      }
      lambda *= 10.0;
    }
    if (!improved || change <= 1e-15 * std::max(rss, 1e-300) || rss < 1e-28) {
      fit.converged = true;
      break;
    }
  }
  p[2] = std::abs(p[2]);
  fit.amplitude = p[0];
  fit.center = p[1];
  fit.width = p[2];
  fit.offset = p[3];
  fit.rss = rss;
  if (!fit.converged) fit.note = "iteration limit reached";

  const std::size_t dof = x.size() - 4;
  if (dof > 0) {
    const Eigen::MatrixXd j = jacobian(p, x);
    const Eigen::Matrix4d jtj = j.transpose() * j;
    Eigen::FullPivLU<Eigen::Matrix4d> lu(jtj);
    if (lu.isInvertible()) {
      const Eigen::Matrix4d cov = lu.inverse() * (rss / static_cast<double>(dof));
      fit.amplitude_err = std::sqrt(std::max(0.0, cov(0, 0)));
      fit.center_err = std::sqrt(std::max(0.0, cov(1, 1)));
      fit.width_err = std::sqrt(std::max(0.0, cov(2, 2)));
      fit.offset_err = std::sqrt(std::max(0.0, cov(3, 3)));
    } else if (fit.note.empty()) {
      fit.note = "singular covariance";
    }
  } else if (fit.note.empty()) {
    fit.note = "no spare degrees of freedom for errors";
  }
  const bool interior = peak > 0 && peak + 1 < y.size();
  if (!interior && fit.note.empty()) fit.note = "maximum at the edge of the window";
  fit.reliable = fit.converged && dof > 0 && interior && std::isfinite(fit.center) && fit.width > 0.0;
  return fit;
}

}  // namespace rydlgt
