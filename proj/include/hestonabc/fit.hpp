#pragma once

#include <vector>

namespace hestonabc {

/// (c0 + c1 x) exp(-(x - mu_f)^2 / (2 sigma_f^2)) with x = ln S~.
struct GaussLinFit {
  double c0 = 0.0;
  double c1 = 0.0;
  double mu_f = 0.0;
  double sigma_f = 1.0;

  bool is_zero() const { return c0 == 0.0 && c1 == 0.0; }
  /// Value at log-price x.
  double at_log(double x) const;
};

enum class FitQuality {
  converged,       // relative step below tolerance
  exact_zero,      // all samples zero
  max_iterations,  // best-so-far after the iteration cap
  stalled,         // damping exhausted before the step criterion was met
};

struct FitResult {
  GaussLinFit fit;
  FitQuality quality = FitQuality::converged;
  int iterations = 0;
  /// RMS residual divided by max |y|; zero for an exact-zero fit.
  double relative_rms = 0.0;
  /// The linear initialization was singular and fell back to c1 = 0.
  bool linear_fallback = false;
};

struct FitOptions {
  double step_tolerance = 1e-10;
  int max_iterations = 200;
};

/// Least-squares fit by Levenberg-Marquardt with an analytic Jacobian.
/// Throws DomainError with fewer than 5 samples or mismatched lengths.
FitResult fit_gauss_linear(const std::vector<double>& x, const std::vector<double>& y,
                           const FitOptions& options = {});

/// Curve value at S~ > 0. Throws DomainError otherwise.
double eval_fit(const GaussLinFit& fit, double s_tilde);

}  // namespace hestonabc
