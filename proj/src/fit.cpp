#include "hestonabc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "hestonabc/errors.hpp"

namespace hestonabc {

namespace {

using Vec4 = Eigen::Vector4d;

double curve(const Vec4& p, double x) {
  const double u = x - p[2];
  return (p[0] + p[1] * x) * std::exp(-u * u / (2.0 * p[3] * p[3]));
}

double sum_squares(const Vec4& p, const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double r = curve(p, x[k]) - y[k];
    s += r * r;
  }
  return s;
}

// Normal equations J^T J and J^T r of the residual curve - y.
void normal_equations(const Vec4& p, const std::vector<double>& x, const std::vector<double>& y,
                      Eigen::Matrix4d& jtj, Vec4& jtr) {
  jtj.setZero();
  jtr.setZero();
  const double s2 = p[3] * p[3];
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double u = x[k] - p[2];
    const double g = std::exp(-u * u / (2.0 * s2));
    const double lin = p[0] + p[1] * x[k];
    Vec4 row;
    row << g, x[k] * g, lin * g * u / s2, lin * g * u * u / (s2 * p[3]);
    const double r = lin * g - y[k];
    jtj.noalias() += row * row.transpose();
    jtr.noalias() += row * r;
  }
}

// Least-squares (c0, c1) with mu and sigma held fixed.
bool linear_coefficients(const std::vector<double>& x, const std::vector<double>& y, double mu,
                         double sigma, double& c0, double& c1) {
  const std::size_t m = x.size();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const double u = x[k] - mu;
    const double g = std::exp(-u * u / (2.0 * sigma * sigma));
    a(static_cast<Eigen::Index>(k), 0) = g;
    a(static_cast<Eigen::Index>(k), 1) = g * x[k];
    b[static_cast<Eigen::Index>(k)] = y[k];
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < 2) {
    double gg = 0.0;
    double gy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double g = a(static_cast<Eigen::Index>(k), 0);
      gg += g * g;
      gy += g * y[k];
    }
    c0 = gg > 0.0 ? gy / gg : 0.0;
    c1 = 0.0;
    return false;
  }
  const Eigen::Vector2d c = qr.solve(b);
  c0 = c[0];
  c1 = c[1];
  return true;
}

}  // namespace

double GaussLinFit::at_log(double x) const {
  if (is_zero()) return 0.0;
  const double u = x - mu_f;
  return (c0 + c1 * x) * std::exp(-u * u / (2.0 * sigma_f * sigma_f));
}

double eval_fit(const GaussLinFit& fit, double s_tilde) {
  if (!(s_tilde > 0.0)) throw DomainError("eval_fit requires S~ > 0");
  return fit.at_log(std::log(s_tilde));
}

FitResult fit_gauss_linear(const std::vector<double>& x, const std::vector<double>& y,
                           const FitOptions& options) {
  if (x.size() != y.size()) throw DomainError("fit samples have mismatched lengths");
  if (x.size() < 5) throw DomainError("fit needs at least 5 samples");

  FitResult result;
  double y_max = 0.0;
  std::size_t peak = 0;
  for (std::size_t k = 0; k < y.size(); ++k) {
    if (std::abs(y[k]) > y_max) {
      y_max = std::abs(y[k]);
      peak = k;
    }
  }
  if (y_max == 0.0) {
    result.fit = {0.0, 0.0, 0.0, 1.0};
    result.quality = FitQuality::exact_zero;
    return result;
  }

  // Start: centre at the peak, width from the half-maximum spread.
  double lo = x[peak];
  double hi = x[peak];
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (std::abs(y[k]) >= 0.5 * y_max) {
      lo = std::min(lo, x[k]);
      hi = std::max(hi, x[k]);
    }
  }
  const auto [x_lo, x_hi] = std::minmax_element(x.begin(), x.end());
  const double min_width = 1e-3 * std::max(*x_hi - *x_lo, 1e-12);
  Vec4 p;
  p[2] = x[peak];
  p[3] = std::max(0.5 * (hi - lo), min_width);
  result.linear_fallback = !linear_coefficients(x, y, p[2], p[3], p[0], p[1]);

  double cost = sum_squares(p, x, y);
  double lambda = 1e-3;
  Eigen::Matrix4d jtj;
  Vec4 jtr;
  result.quality = FitQuality::max_iterations;
  int iter = 0;
  bool refresh = true;
  for (; iter < options.max_iterations; ++iter) {
    if (refresh) normal_equations(p, x, y, jtj, jtr);
    Eigen::Matrix4d damped = jtj;
    for (int d = 0; d < 4; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-300);
    const Vec4 step = damped.ldlt().solve(-jtr);
    if (!step.allFinite()) {
      lambda *= 10.0;
      refresh = false;
      if (lambda > 1e16) {
        result.quality = FitQuality::stalled;
        break;
      }
      continue;
    }
    const Vec4 trial = p + step;
    const double trial_cost = sum_squares(trial, x, y);
    const bool small = step.norm() <= options.step_tolerance * (p.norm() + options.step_tolerance);
    if (std::isfinite(trial_cost) && trial_cost <= cost) {
      p = trial;
      cost = trial_cost;
      lambda = std::max(lambda / 10.0, 1e-15);
      refresh = true;
      if (small) {
        result.quality = FitQuality::converged;
        ++iter;
        break;
      }
    } else {
      if (small) {
        result.quality = FitQuality::converged;
        ++iter;
        break;
      }
      lambda *= 10.0;
      refresh = false;
      if (lambda > 1e16) {
        result.quality = FitQuality::stalled;
        ++iter;
        break;
      }
    }
  }
  result.iterations = iter;
  result.fit = {p[0], p[1], p[2], std::abs(p[3])};
  result.relative_rms = std::sqrt(cost / static_cast<double>(x.size())) / y_max;
  return result;
}

}  // namespace hestonabc
